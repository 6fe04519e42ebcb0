#include "minibqml/table.hpp"

#include "minibqml/error.hpp"

#include <algorithm>
#include <cctype>

namespace minibqml {

Column::Column(std::string name, ColumnType type)
    : name_(std::move(name)), type_(type) {
  switch (type) {
  case ColumnType::Int64:
    cells_ = std::vector<std::int64_t>{};
    break;
  case ColumnType::Float64:
    cells_ = std::vector<double>{};
    break;
  case ColumnType::String:
    cells_ = std::vector<std::string>{};
    break;
  }
}

std::int64_t Column::int_at(std::size_t row) const {
  return std::get<std::vector<std::int64_t>>(cells_)[row];
}

double Column::float_at(std::size_t row) const {
  return std::get<std::vector<double>>(cells_)[row];
}

const std::string &Column::string_at(std::size_t row) const {
  return std::get<std::vector<std::string>>(cells_)[row];
}

double Column::numeric_at(std::size_t row) const {
  if (type_ == ColumnType::Int64)
    return static_cast<double>(int_at(row));
  return float_at(row);
}

Value Column::at(std::size_t row) const {
  if (is_null(row))
    return Null{};
  switch (type_) {
  case ColumnType::Int64:
    return int_at(row);
  case ColumnType::Float64:
    return float_at(row);
  case ColumnType::String:
    return string_at(row);
  }
  return Null{};
}

void Column::append(const Value &v) {
  if (v.is_null()) {
    append_null();
    return;
  }
  switch (type_) {
  case ColumnType::Int64:
    if (!v.is_int())
      throw TypeError("column '" + name_ + "' is INT64 but got a non-integer value");
    std::get<std::vector<std::int64_t>>(cells_).push_back(v.as_int());
    break;
  case ColumnType::Float64:
    if (!v.is_numeric())
      throw TypeError("column '" + name_ + "' is FLOAT64 but got a non-numeric value");
    std::get<std::vector<double>>(cells_).push_back(v.to_double());
    break;
  case ColumnType::String:
    if (!v.is_string())
      throw TypeError("column '" + name_ + "' is STRING but got a non-string value");
    std::get<std::vector<std::string>>(cells_).push_back(v.as_string());
    break;
  }
  nulls_.push_back(0);
}

void Column::append_null() {
  std::visit([](auto &vec) { vec.emplace_back(); }, cells_);
  nulls_.push_back(1);
}

void Column::reserve(std::size_t n) {
  std::visit([n](auto &vec) { vec.reserve(n); }, cells_);
  nulls_.reserve(n);
}

Column Column::take(const std::vector<std::size_t> &indices) const {
  Column out(name_, type_);
  std::visit(
      [&](const auto &src) {
        auto &dst = std::get<std::decay_t<decltype(src)>>(out.cells_);
        dst.reserve(indices.size());
        for (std::size_t i : indices)
          dst.push_back(src[i]);
      },
      cells_);
  out.nulls_.reserve(indices.size());
  for (std::size_t i : indices)
    out.nulls_.push_back(nulls_[i]);
  return out;
}

bool Column::operator==(const Column &other) const {
  if (name_ != other.name_ || type_ != other.type_ || size() != other.size())
    return false;
  for (std::size_t i = 0; i < size(); ++i)
    if (!(at(i) == other.at(i)))
      return false;
  return true;
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char &c : out)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string to_upper(std::string_view s) {
  std::string out(s);
  for (char &c : out)
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::optional<std::size_t> Table::find_column(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (iequals(columns_[i].name(), name))
      return i;
  return std::nullopt;
}

const Column &Table::column(std::string_view name) const {
  auto idx = find_column(name);
  if (!idx)
    throw NameError("unknown column '" + std::string(name) + "'" +
                    (name_.empty() ? "" : " in table '" + name_ + "'"));
  return columns_[*idx];
}

void Table::add_column(Column column) {
  if (find_column(column.name()))
    throw CatalogError("duplicate column name '" + column.name() + "'");
  if (!columns_.empty() && column.size() != row_count_)
    throw SchemaError("column '" + column.name() + "' has " +
                      std::to_string(column.size()) + " cells, expected " +
                      std::to_string(row_count_));
  row_count_ = column.size();
  columns_.push_back(std::move(column));
}

void Table::put_column(Column column) {
  if (auto idx = find_column(column.name())) {
    if (column.size() != row_count_)
      throw SchemaError("column '" + column.name() + "' has wrong length");
    columns_[*idx] = std::move(column);
    return;
  }
  add_column(std::move(column));
}

void Table::set_row_count(std::size_t n) {
  for (const auto &c : columns_)
    if (c.size() != n)
      throw SchemaError("column '" + c.name() + "' has " + std::to_string(c.size()) +
                        " cells, expected " + std::to_string(n));
  row_count_ = n;
}

Table Table::take(const std::vector<std::size_t> &indices) const {
  Table out(name_);
  for (const auto &c : columns_)
    out.columns_.push_back(c.take(indices));
  out.row_count_ = indices.size();
  return out;
}

bool Table::same_contents(const Table &other) const {
  return row_count_ == other.row_count_ && columns_ == other.columns_;
}

} // namespace minibqml

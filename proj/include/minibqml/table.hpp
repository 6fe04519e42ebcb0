#pragma once

#include "minibqml/value.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace minibqml {

/// Typed, nullable column. Cells are stored in a type-specific vector plus a
/// null mask; a null cell holds a default-constructed placeholder.
class Column {
public:
  Column(std::string name, ColumnType type);

  const std::string &name() const { return name_; }
  void rename(std::string name) { name_ = std::move(name); }
  ColumnType type() const { return type_; }
  std::size_t size() const { return nulls_.size(); }

  bool is_null(std::size_t row) const { return nulls_[row] != 0; }
  std::int64_t int_at(std::size_t row) const;
  double float_at(std::size_t row) const;
  const std::string &string_at(std::size_t row) const;
  /// Numeric cell widened to double. Precondition: numeric type, non-null.
  double numeric_at(std::size_t row) const;
  Value at(std::size_t row) const;

  /// Appends `v`; Int values are widened into Float64 columns, anything else
  /// that does not match the column type throws TypeError.
  void append(const Value &v);
  void append_null();
  void reserve(std::size_t n);

  /// New column holding rows `indices` (in that order).
  Column take(const std::vector<std::size_t> &indices) const;

  bool operator==(const Column &other) const;

private:
  std::string name_;
  ColumnType type_;
  std::variant<std::vector<std::int64_t>, std::vector<double>,
               std::vector<std::string>>
      cells_;
  std::vector<std::uint8_t> nulls_;
};

bool iequals(std::string_view a, std::string_view b);
std::string to_lower(std::string_view s);
std::string to_upper(std::string_view s);

/// Named columnar relation. Column names are unique case-insensitively and all
/// columns have exactly row_count() cells.
class Table {
public:
  Table() = default;
  explicit Table(std::string name) : name_(std::move(name)) {}

  const std::string &name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  std::size_t row_count() const { return row_count_; }
  std::size_t column_count() const { return columns_.size(); }
  const std::vector<Column> &columns() const { return columns_; }
  const Column &column(std::size_t i) const { return columns_[i]; }
  Column &column(std::size_t i) { return columns_[i]; }

  std::optional<std::size_t> find_column(std::string_view name) const;
  /// Throws NameError when absent.
  const Column &column(std::string_view name) const;

  /// Adds a column; throws CatalogError on a duplicate name and
  /// SchemaError when its length disagrees with existing columns.
  void add_column(Column column);
  /// Replaces the column with the same name, or appends it.
  void put_column(Column column);
  /// Must be called after appending rows column-by-column.
  void set_row_count(std::size_t n);

  Table take(const std::vector<std::size_t> &indices) const;

  /// Same column names, types, and cells (names compared exactly).
  bool same_contents(const Table &other) const;

private:
  std::string name_;
  std::vector<Column> columns_;
  std::size_t row_count_ = 0;
};

} // namespace minibqml

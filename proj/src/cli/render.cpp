#include "minibqml/cli/render.hpp"

#include "minibqml/csv.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace minibqml::cli {

std::optional<OutputFormat> parse_output_format(std::string_view name) {
  if (iequals(name, "table"))
    return OutputFormat::Table;
  if (iequals(name, "csv"))
    return OutputFormat::Csv;
  if (iequals(name, "json"))
    return OutputFormat::Json;
  return std::nullopt;
}

namespace {

void render_grid(const Table &t, std::ostream &out) {
  const std::size_t cols = t.column_count();
  std::vector<std::vector<std::string>> cells(t.row_count(), std::vector<std::string>(cols));
  std::vector<std::size_t> width(cols);
  std::vector<bool> right(cols);
  for (std::size_t j = 0; j < cols; ++j) {
    const Column &c = t.column(j);
    width[j] = c.name().size();
    right[j] = c.type() != ColumnType::String;
    for (std::size_t i = 0; i < t.row_count(); ++i) {
      cells[i][j] = c.is_null(i) ? "NULL" : format_value(c.at(i));
      width[j] = std::max(width[j], cells[i][j].size());
    }
  }
  auto rule = [&] {
    out << '+';
    for (auto w : width)
      out << std::string(w + 2, '-') << '+';
    out << '\n';
  };
  auto line = [&](const std::vector<std::string> &row, bool header) {
    out << '|';
    for (std::size_t j = 0; j < cols; ++j) {
      const auto pad = std::string(width[j] - row[j].size(), ' ');
      out << ' ' << (right[j] && !header ? pad + row[j] : row[j] + pad) << " |";
    }
    out << '\n';
  };
  std::vector<std::string> header;
  for (const auto &c : t.columns())
    header.push_back(c.name());
  rule();
  line(header, true);
  rule();
  for (const auto &row : cells)
    line(row, false);
  rule();
  out << "(" << t.row_count() << (t.row_count() == 1 ? " row)" : " rows)") << '\n';
}

void render_json(const Table &t, std::ostream &out) {
  using json = nlohmann::ordered_json;
  json rows = json::array();
  for (std::size_t i = 0; i < t.row_count(); ++i) {
    json row = json::object();
    for (const auto &c : t.columns()) {
      if (c.is_null(i)) {
        row[c.name()] = nullptr;
      } else if (c.type() == ColumnType::Int64) {
        row[c.name()] = c.int_at(i);
      } else if (c.type() == ColumnType::Float64) {
        const double v = c.float_at(i);
        if (std::isfinite(v))
          row[c.name()] = v;
        else
          row[c.name()] = format_double(v);
      } else {
        row[c.name()] = c.string_at(i);
      }
    }
    rows.push_back(std::move(row));
  }
  out << rows.dump(2) << '\n';
}

} // namespace

void render(const Table &table, OutputFormat format, std::ostream &out) {
  switch (format) {
  case OutputFormat::Table:
    render_grid(table, out);
    break;
  case OutputFormat::Csv:
    write_csv(table, out);
    break;
  case OutputFormat::Json:
    render_json(table, out);
    break;
  }
}

} // namespace minibqml::cli

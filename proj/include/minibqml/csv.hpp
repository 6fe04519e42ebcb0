#pragma once

#include "minibqml/table.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace minibqml {

/// Splits RFC 4180-style CSV text into records. Quoted fields may contain
/// commas, newlines, and `""` escapes. An empty field, quoted or not, is NULL
/// once typed.
struct CsvRecords {
  std::vector<std::vector<std::string>> fields;
};
CsvRecords split_csv(std::string_view text);

/// Infers the column type from its non-empty fields: INT64 if all parse as
/// decimal integers, else FLOAT64 if all parse as decimal reals, else STRING.
/// A column with no non-empty fields is STRING.
ColumnType infer_column_type(const std::vector<std::string_view> &fields);

/// Parses CSV text (header row first) into a table. Empty fields become NULL.
Table parse_csv(std::string_view text, std::string table_name);

/// Reads a CSV file. Throws IoError when the file cannot be read.
Table read_csv(const std::filesystem::path &path, std::string table_name);

/// Quotes a field when it contains a delimiter, quote, or line break.
std::string csv_escape(std::string_view field);

void write_csv(const Table &table, std::ostream &out);
void write_csv(const Table &table, const std::filesystem::path &path);

} // namespace minibqml

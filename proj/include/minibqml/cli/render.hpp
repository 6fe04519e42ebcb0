#pragma once

#include "minibqml/table.hpp"

#include <iosfwd>
#include <optional>
#include <string_view>

namespace minibqml::cli {

enum class OutputFormat { Table, Csv, Json };

std::optional<OutputFormat> parse_output_format(std::string_view name);

/// Table: aligned text grid with NULL shown as "NULL".
/// Csv: header plus rows, NULL as an empty field.
/// Json: array of row objects keyed by column name, NULL as null.
void render(const Table &table, OutputFormat format, std::ostream &out);

} // namespace minibqml::cli

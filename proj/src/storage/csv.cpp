#include "minibqml/csv.hpp"

#include "minibqml/error.hpp"

#include <fstream>
#include <sstream>

namespace minibqml {

CsvRecords split_csv(std::string_view text) {
  CsvRecords out;
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF")
    text.remove_prefix(3);

  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t record_no = 1;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    out.fields.push_back(std::move(record));
    record.clear();
    ++record_no;
  };

  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          i += 2;
          continue;
        }
        in_quotes = false;
        ++i;
        if (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r')
          throw CsvError("unexpected character after closing quote", record_no);
        continue;
      }
      field += c;
      ++i;
      continue;
    }
    if (c == '"') {
      if (field_started)
        throw CsvError("quote inside unquoted field", record_no);
      in_quotes = true;
      field_started = true;
      ++i;
    } else if (c == ',') {
      end_field();
      ++i;
    } else if (c == '\r' || c == '\n') {
      end_record();
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n')
        ++i;
      ++i;
    } else {
      field += c;
      field_started = true;
      ++i;
    }
  }
  if (in_quotes)
    throw CsvError("unterminated quoted field", record_no);
  if (field_started || !record.empty())
    end_record();
  return out;
}

ColumnType infer_column_type(const std::vector<std::string_view> &fields) {
  bool any = false;
  bool all_int = true;
  bool all_real = true;
  for (auto f : fields) {
    if (f.empty())
      continue;
    any = true;
    if (all_int && !parse_int64(f))
      all_int = false;
    if (!all_int && !parse_real(f)) {
      all_real = false;
      break;
    }
  }
  if (!any)
    return ColumnType::String;
  if (all_int)
    return ColumnType::Int64;
  if (all_real)
    return ColumnType::Float64;
  return ColumnType::String;
}

Table parse_csv(std::string_view text, std::string table_name) {
  CsvRecords records = split_csv(text);
  if (records.fields.empty())
    throw CsvError("missing header row", 1);
  const auto &header = records.fields.front();
  const std::size_t width = header.size();
  for (std::size_t r = 1; r < records.fields.size(); ++r)
    if (records.fields[r].size() != width)
      throw CsvError("expected " + std::to_string(width) + " fields, found " +
                         std::to_string(records.fields[r].size()),
                     r + 1);

  const std::size_t rows = records.fields.size() - 1;
  Table table(std::move(table_name));
  std::vector<std::string_view> column_fields(rows);
  for (std::size_t c = 0; c < width; ++c) {
    if (header[c].empty())
      throw CsvError("empty column name in header", 1);
    for (std::size_t r = 0; r < rows; ++r)
      column_fields[r] = records.fields[r + 1][c];
    ColumnType type = infer_column_type(column_fields);
    Column column(header[c], type);
    column.reserve(rows);
    for (auto f : column_fields) {
      if (f.empty()) {
        column.append_null();
        continue;
      }
      switch (type) {
      case ColumnType::Int64:
        column.append(*parse_int64(f));
        break;
      case ColumnType::Float64:
        column.append(*parse_real(f));
        break;
      case ColumnType::String:
        column.append(std::string(f));
        break;
      }
    }
    table.add_column(std::move(column));
  }
  table.set_row_count(rows);
  return table;
}

Table read_csv(const std::filesystem::path &path, std::string table_name) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad())
    throw IoError("error reading '" + path.string() + "'");
  return parse_csv(buf.str(), std::move(table_name));
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos)
    return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"')
      out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_csv(const Table &table, std::ostream &out) {
  for (std::size_t c = 0; c < table.column_count(); ++c)
    out << (c ? "," : "") << csv_escape(table.column(c).name());
  out << '\n';
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    for (std::size_t c = 0; c < table.column_count(); ++c)
      out << (c ? "," : "") << csv_escape(format_value(table.column(c).at(r)));
    out << '\n';
  }
}

void write_csv(const Table &table, const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError("cannot open '" + path.string() + "' for writing");
  write_csv(table, out);
  if (!out)
    throw IoError("error writing '" + path.string() + "'");
}

} // namespace minibqml

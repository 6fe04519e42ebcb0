#include "minibqml/value.hpp"

#include <charconv>
#include <cmath>
#include <cctype>

namespace minibqml {

std::string_view to_string(ColumnType type) {
  switch (type) {
  case ColumnType::Int64:
    return "INT64";
  case ColumnType::Float64:
    return "FLOAT64";
  case ColumnType::String:
    return "STRING";
  }
  return "?";
}

std::optional<ColumnType> parse_column_type(std::string_view name) {
  if (name == "INT64")
    return ColumnType::Int64;
  if (name == "FLOAT64")
    return ColumnType::Float64;
  if (name == "STRING")
    return ColumnType::String;
  return std::nullopt;
}

std::string format_double(double v) {
  if (std::isnan(v))
    return "nan";
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  std::string out(buf, end);
  if (out.find_first_of(".e") == std::string::npos)
    out += ".0";
  return out;
}

std::string format_value(const Value &v) {
  if (v.is_null())
    return "";
  if (v.is_int())
    return std::to_string(v.as_int());
  if (v.is_float())
    return format_double(v.as_float());
  return v.as_string();
}

std::optional<std::int64_t> parse_int64(std::string_view text) {
  if (text.empty())
    return std::nullopt;
  std::size_t pos = 0;
  bool negative = false;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    pos = 1;
  }
  if (pos == text.size())
    return std::nullopt;
  for (std::size_t i = pos; i < text.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(text[i])))
      return std::nullopt;
  // from_chars does not accept a leading '+', but does accept '-'.
  std::string_view digits = text.substr(negative ? 0 : pos);
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || ptr != digits.data() + digits.size())
    return std::nullopt;
  return value;
}

std::optional<double> parse_real(std::string_view text) {
  std::size_t i = 0;
  const std::size_t n = text.size();
  auto digit = [&](std::size_t k) {
    return k < n && std::isdigit(static_cast<unsigned char>(text[k]));
  };
  if (i < n && (text[i] == '+' || text[i] == '-'))
    ++i;
  std::size_t int_digits = 0, frac_digits = 0;
  while (digit(i)) {
    ++i;
    ++int_digits;
  }
  if (i < n && text[i] == '.') {
    ++i;
    while (digit(i)) {
      ++i;
      ++frac_digits;
    }
  }
  if (int_digits + frac_digits == 0)
    return std::nullopt;
  if (i < n && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    if (i < n && (text[i] == '+' || text[i] == '-'))
      ++i;
    if (!digit(i))
      return std::nullopt;
    while (digit(i))
      ++i;
  }
  if (i != n)
    return std::nullopt;
  std::string_view body = text[0] == '+' ? text.substr(1) : text;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
  if (ptr != body.data() + body.size())
    return std::nullopt;
  if (ec == std::errc::result_out_of_range)
    return std::nullopt;
  return value;
}

} // namespace minibqml

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace minibqml {

enum class ColumnType { Int64, Float64, String };

std::string_view to_string(ColumnType type);
std::optional<ColumnType> parse_column_type(std::string_view name);

struct Null {
  bool operator==(const Null &) const = default;
};

/// A single cell. Arithmetic between Int and Float promotes to Float;
/// arithmetic with Null yields Null.
class Value {
public:
  Value() = default;
  Value(Null) {}
  Value(std::int64_t v) : data_(v) {}
  Value(int v) : data_(static_cast<std::int64_t>(v)) {}
  Value(double v) : data_(v) {}
  Value(std::string v) : data_(std::move(v)) {}
  Value(const char *v) : data_(std::string(v)) {}

  bool is_null() const { return std::holds_alternative<Null>(data_); }
  bool is_int() const { return std::holds_alternative<std::int64_t>(data_); }
  bool is_float() const { return std::holds_alternative<double>(data_); }
  bool is_string() const { return std::holds_alternative<std::string>(data_); }
  bool is_numeric() const { return is_int() || is_float(); }

  std::int64_t as_int() const { return std::get<std::int64_t>(data_); }
  double as_float() const { return std::get<double>(data_); }
  const std::string &as_string() const { return std::get<std::string>(data_); }
  /// Numeric value widened to double. Precondition: is_numeric().
  double to_double() const {
    return is_int() ? static_cast<double>(as_int()) : as_float();
  }

  /// Exact equality including the variant (Int 1 != Float 1.0).
  bool operator==(const Value &other) const = default;

private:
  std::variant<Null, std::int64_t, double, std::string> data_;
};

/// Shortest decimal text that reads back to the same double. Always contains
/// a '.', an exponent, or is non-finite, so it never looks like an integer.
std::string format_double(double v);

/// Text of a cell as it appears in CSV output; Null renders as "".
std::string format_value(const Value &v);

/// Strict decimal integer parse (optional sign, digits, fits in int64).
std::optional<std::int64_t> parse_int64(std::string_view text);

/// Strict decimal real parse: [+-]? (d+ [. d*] | . d+) ([eE] [+-]? d+)?.
std::optional<double> parse_real(std::string_view text);

} // namespace minibqml

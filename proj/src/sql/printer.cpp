#include "minibqml/sql/parser.hpp"
#include "minibqml/sql/token.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

namespace minibqml::sql {

namespace {

std::string identifier(const std::string &name) {
  bool bare = !name.empty() &&
              (std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_') &&
              !is_reserved_keyword(name);
  for (char c : name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
      bare = false;
  return bare ? name : "`" + name + "`";
}

std::string qualified(const QualifiedName &name) {
  std::string out;
  for (std::size_t i = 0; i < name.parts.size(); ++i)
    out += (i ? "." : "") + identifier(name.parts[i]);
  return out;
}

std::string string_literal(const std::string &s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += '\'';
    out += c;
  }
  return out + "'";
}

std::string number(const NumberLit &n) {
  char buf[400];
  const double magnitude = std::fabs(n.value);
  std::string sign = n.value < 0 || std::signbit(n.value) ? "-" : "";
  if (n.integral) {
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), magnitude,
                                   std::chars_format::fixed);
    return sign + std::string(buf, end);
  }
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), magnitude);
  std::string body(buf, end);
  if (body.find_first_of(".e") == std::string::npos)
    body += ".0";
  return sign + body;
}

struct ExprPrinter {
  std::string operator()(const ColumnRef &c) const { return identifier(c.name); }
  std::string operator()(const NumberLit &n) const {
    // A negative literal cannot come from the parser; print it as a negation.
    return n.value < 0 || std::signbit(n.value) ? "(" + number(n) + ")" : number(n);
  }
  std::string operator()(const StringLit &s) const { return string_literal(s.value); }
  std::string operator()(const NullLit &) const { return "NULL"; }
  std::string operator()(const Star &) const { return "*"; }
  std::string operator()(const Unary &u) const {
    if (u.op == UnaryOp::Negate)
      return "(-" + pretty_print(*u.operand) + ")";
    return "(NOT " + pretty_print(*u.operand) + ")";
  }
  std::string operator()(const Binary &b) const {
    return "(" + pretty_print(*b.lhs) + " " + std::string(binary_op_text(b.op)) + " " +
           pretty_print(*b.rhs) + ")";
  }
  std::string operator()(const IsNull &n) const {
    return "(" + pretty_print(*n.operand) + (n.negated ? " IS NOT NULL)" : " IS NULL)");
  }
  std::string operator()(const Case &c) const {
    std::string out = "CASE";
    for (const auto &w : c.whens)
      out += " WHEN " + pretty_print(*w.condition) + " THEN " + pretty_print(*w.result);
    if (c.otherwise)
      out += " ELSE " + pretty_print(**c.otherwise);
    return out + " END";
  }
  std::string operator()(const Call &c) const {
    std::string out = std::string(function_name(c.function)) + "(";
    for (std::size_t i = 0; i < c.args.size(); ++i)
      out += (i ? ", " : "") + pretty_print(c.args[i]);
    return out + ")";
  }
};

std::string option_value(const OptionValue &v) {
  return std::visit(
      [](const auto &x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, NumberLit>) {
          return number(x);
        } else if constexpr (std::is_same_v<T, std::string>) {
          return string_literal(x);
        } else if constexpr (std::is_same_v<T, std::vector<std::string>>) {
          std::string out = "[";
          for (std::size_t i = 0; i < x.size(); ++i)
            out += (i ? ", " : "") + string_literal(x[i]);
          return out + "]";
        } else {
          std::string out = "[";
          for (std::size_t i = 0; i < x.size(); ++i)
            out += (i ? ", " : "") + number(x[i]);
          return out + "]";
        }
      },
      v);
}

std::string ml_input(const SelectStmt &s) { return "(" + pretty_print(s) + ")"; }

struct StatementPrinter {
  std::string operator()(const SelectStmt &s) const { return pretty_print(s); }
  std::string operator()(const CreateModelStmt &s) const {
    std::string out = s.replace ? "CREATE OR REPLACE MODEL " : "CREATE MODEL ";
    out += qualified(s.name);
    if (!s.options.entries.empty()) {
      out += "\nOPTIONS(";
      for (std::size_t i = 0; i < s.options.entries.size(); ++i) {
        const auto &[k, v] = s.options.entries[i];
        out += (i ? ",\n  " : "\n  ") + k + " = " + option_value(v);
      }
      out += "\n)";
    }
    return out + " AS\n" + pretty_print(s.query);
  }
  std::string operator()(const CreateTableFromCsvStmt &s) const {
    return std::string(s.replace ? "CREATE OR REPLACE TABLE " : "CREATE TABLE ") +
           qualified(s.name) + " FROM CSV " + string_literal(s.path);
  }
  std::string operator()(const MlEvaluateStmt &s) const {
    std::string out = "SELECT * FROM ML.EVALUATE(MODEL " + qualified(s.model);
    if (s.input)
      out += ", " + ml_input(*s.input);
    return out + ")";
  }
  std::string operator()(const MlPredictStmt &s) const {
    std::string out = "SELECT * FROM ML.PREDICT(MODEL " + qualified(s.model) + ", " +
                      ml_input(s.input);
    if (s.threshold != 0.5)
      out += ", STRUCT(" + number(NumberLit{s.threshold, false}) + " AS threshold)";
    return out + ")";
  }
  std::string operator()(const MlFeatureImportanceStmt &s) const {
    return "SELECT * FROM ML.FEATURE_IMPORTANCE(MODEL " + qualified(s.model) + ")";
  }
  std::string operator()(const MlRocCurveStmt &s) const {
    return "SELECT * FROM ML.ROC_CURVE(MODEL " + qualified(s.model) + ")";
  }
};

} // namespace

std::string pretty_print(const Expr &expr) { return std::visit(ExprPrinter{}, expr.node); }

std::string pretty_print(const SelectStmt &stmt) {
  std::string out = "SELECT ";
  for (std::size_t i = 0; i < stmt.items.size(); ++i) {
    const auto &item = stmt.items[i];
    out += (i ? ", " : "") + pretty_print(item.expr);
    if (item.alias)
      out += " AS " + identifier(*item.alias);
  }
  out += " FROM " + qualified(stmt.from);
  if (stmt.where)
    out += " WHERE " + pretty_print(*stmt.where);
  return out;
}

std::string pretty_print(const Statement &stmt) {
  return std::visit(StatementPrinter{}, stmt);
}

} // namespace minibqml::sql

#include "minibqml/sql/ast.hpp"

#include "minibqml/table.hpp"

namespace minibqml::sql {

bool Call::operator==(const Call &other) const {
  return function == other.function && args == other.args;
}

std::string_view function_name(Function f) {
  switch (f) {
  case Function::Coalesce:
    return "COALESCE";
  case Function::Count:
    return "COUNT";
  case Function::Sum:
    return "SUM";
  case Function::Avg:
    return "AVG";
  case Function::Corr:
    return "CORR";
  }
  return "?";
}

std::optional<Function> function_from_name(std::string_view name) {
  for (auto f : {Function::Coalesce, Function::Count, Function::Sum, Function::Avg,
                 Function::Corr})
    if (iequals(function_name(f), name))
      return f;
  return std::nullopt;
}

bool is_aggregate(Function f) { return f != Function::Coalesce; }

bool contains_aggregate(const Expr &e) {
  return std::visit(
      [](const auto &n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Unary>) {
          return contains_aggregate(*n.operand);
        } else if constexpr (std::is_same_v<T, Binary>) {
          return contains_aggregate(*n.lhs) || contains_aggregate(*n.rhs);
        } else if constexpr (std::is_same_v<T, IsNull>) {
          return contains_aggregate(*n.operand);
        } else if constexpr (std::is_same_v<T, Case>) {
          for (const auto &w : n.whens)
            if (contains_aggregate(*w.condition) || contains_aggregate(*w.result))
              return true;
          return n.otherwise && contains_aggregate(**n.otherwise);
        } else if constexpr (std::is_same_v<T, Call>) {
          if (is_aggregate(n.function))
            return true;
          for (const auto &a : n.args)
            if (contains_aggregate(a))
              return true;
          return false;
        } else {
          return false;
        }
      },
      e.node);
}

std::string_view binary_op_text(BinaryOp op) {
  switch (op) {
  case BinaryOp::Eq:
    return "=";
  case BinaryOp::Ne:
    return "<>";
  case BinaryOp::Lt:
    return "<";
  case BinaryOp::Le:
    return "<=";
  case BinaryOp::Gt:
    return ">";
  case BinaryOp::Ge:
    return ">=";
  case BinaryOp::Add:
    return "+";
  case BinaryOp::Sub:
    return "-";
  case BinaryOp::Mul:
    return "*";
  case BinaryOp::Div:
    return "/";
  case BinaryOp::And:
    return "AND";
  case BinaryOp::Or:
    return "OR";
  }
  return "?";
}

const OptionValue *OptionsMap::find(std::string_view key) const {
  for (const auto &[k, v] : entries)
    if (k == key)
      return &v;
  return nullptr;
}

void OptionsMap::set(std::string key, OptionValue value) {
  for (auto &[k, v] : entries)
    if (k == key) {
      v = std::move(value);
      return;
    }
  entries.emplace_back(std::move(key), std::move(value));
}

} // namespace minibqml::sql

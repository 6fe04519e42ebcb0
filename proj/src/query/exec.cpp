#include "minibqml/query/exec.hpp"

#include "minibqml/catalog.hpp"
#include "minibqml/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace minibqml::query {

using namespace sql;

namespace {

// Static typing ----------------------------------------------------------------

enum class Kind { Int, Float, String, Null };

Kind kind_of(ColumnType t) {
  switch (t) {
  case ColumnType::Int64:
    return Kind::Int;
  case ColumnType::Float64:
    return Kind::Float;
  case ColumnType::String:
    return Kind::String;
  }
  return Kind::Null;
}

ColumnType column_type_of(Kind k) {
  switch (k) {
  case Kind::Float:
    return ColumnType::Float64;
  case Kind::String:
    return ColumnType::String;
  default:
    return ColumnType::Int64;
  }
}

bool numeric(Kind k) { return k == Kind::Int || k == Kind::Float || k == Kind::Null; }

Kind unify(Kind a, Kind b, const char *context) {
  if (a == Kind::Null)
    return b;
  if (b == Kind::Null)
    return a;
  if (a == b)
    return a;
  if (numeric(a) && numeric(b))
    return Kind::Float;
  throw TypeError(std::string("incompatible types in ") + context);
}

void require_numeric(Kind k, const char *context) {
  if (!numeric(k))
    throw TypeError(std::string(context) + " requires numeric operands");
}

void require_boolean(Kind k, const char *context) {
  if (!numeric(k))
    throw TypeError(std::string(context) + " requires a boolean (numeric) operand");
}

Kind type_of(const Expr &e, const Table &t) {
  return std::visit(
      [&](const auto &n) -> Kind {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ColumnRef>) {
          return kind_of(t.column(n.name).type());
        } else if constexpr (std::is_same_v<T, NumberLit>) {
          return n.integral && std::fabs(n.value) < 9.2e18 ? Kind::Int : Kind::Float;
        } else if constexpr (std::is_same_v<T, StringLit>) {
          return Kind::String;
        } else if constexpr (std::is_same_v<T, NullLit>) {
          return Kind::Null;
        } else if constexpr (std::is_same_v<T, Star>) {
          throw TypeError("'*' is not valid in this position");
        } else if constexpr (std::is_same_v<T, Unary>) {
          Kind k = type_of(*n.operand, t);
          if (n.op == UnaryOp::Negate) {
            require_numeric(k, "unary minus");
            return k;
          }
          require_boolean(k, "NOT");
          return Kind::Int;
        } else if constexpr (std::is_same_v<T, Binary>) {
          Kind a = type_of(*n.lhs, t), b = type_of(*n.rhs, t);
          switch (n.op) {
          case BinaryOp::Add:
          case BinaryOp::Sub:
          case BinaryOp::Mul:
            require_numeric(a, "arithmetic");
            require_numeric(b, "arithmetic");
            return unify(a, b, "arithmetic");
          case BinaryOp::Div:
            require_numeric(a, "division");
            require_numeric(b, "division");
            return Kind::Float;
          case BinaryOp::And:
          case BinaryOp::Or:
            require_boolean(a, "AND/OR");
            require_boolean(b, "AND/OR");
            return Kind::Int;
          default:
            unify(a, b, "comparison");
            return Kind::Int;
          }
        } else if constexpr (std::is_same_v<T, IsNull>) {
          type_of(*n.operand, t);
          return Kind::Int;
        } else if constexpr (std::is_same_v<T, Case>) {
          Kind result = Kind::Null;
          for (const auto &w : n.whens) {
            require_boolean(type_of(*w.condition, t), "CASE WHEN");
            result = unify(result, type_of(*w.result, t), "CASE results");
          }
          if (n.otherwise)
            result = unify(result, type_of(**n.otherwise, t), "CASE results");
          return result;
        } else {
          // Call
          switch (n.function) {
          case Function::Coalesce: {
            Kind result = Kind::Null;
            for (const auto &a : n.args)
              result = unify(result, type_of(a, t), "COALESCE arguments");
            return result;
          }
          case Function::Count:
            if (!n.args[0].template is<Star>())
              type_of(n.args[0], t);
            return Kind::Int;
          case Function::Sum: {
            Kind k = type_of(n.args[0], t);
            require_numeric(k, "SUM");
            return k == Kind::Float ? Kind::Float : Kind::Int;
          }
          case Function::Avg:
            require_numeric(type_of(n.args[0], t), "AVG");
            return Kind::Float;
          case Function::Corr:
            require_numeric(type_of(n.args[0], t), "CORR");
            require_numeric(type_of(n.args[1], t), "CORR");
            return Kind::Float;
          }
          return Kind::Null;
        }
      },
      e.node);
}

// Scalar semantics ---------------------------------------------------------

/// Three-valued truth: nullopt is UNKNOWN.
std::optional<bool> truth(const Value &v) {
  if (v.is_null())
    return std::nullopt;
  if (v.is_string())
    throw TypeError("string used as a boolean");
  return v.to_double() != 0.0;
}

Value from_bool(std::optional<bool> b) {
  if (!b)
    return Null{};
  return Value(static_cast<std::int64_t>(*b ? 1 : 0));
}

Value arithmetic(BinaryOp op, const Value &a, const Value &b) {
  if (a.is_null() || b.is_null())
    return Null{};
  if (op == BinaryOp::Div) {
    double d = b.to_double();
    if (d == 0.0)
      return Null{};
    return a.to_double() / d;
  }
  if (a.is_int() && b.is_int()) {
    std::int64_t out = 0;
    bool overflow = false;
    switch (op) {
    case BinaryOp::Add:
      overflow = __builtin_add_overflow(a.as_int(), b.as_int(), &out);
      break;
    case BinaryOp::Sub:
      overflow = __builtin_sub_overflow(a.as_int(), b.as_int(), &out);
      break;
    default:
      overflow = __builtin_mul_overflow(a.as_int(), b.as_int(), &out);
      break;
    }
    if (overflow)
      throw TypeError("integer overflow in arithmetic");
    return out;
  }
  double x = a.to_double(), y = b.to_double();
  switch (op) {
  case BinaryOp::Add:
    return x + y;
  case BinaryOp::Sub:
    return x - y;
  default:
    return x * y;
  }
}

Value compare(BinaryOp op, const Value &a, const Value &b) {
  if (a.is_null() || b.is_null())
    return Null{};
  int cmp = 0;
  if (a.is_string() && b.is_string()) {
    cmp = a.as_string().compare(b.as_string());
  } else if (a.is_int() && b.is_int()) {
    cmp = a.as_int() < b.as_int() ? -1 : (a.as_int() > b.as_int() ? 1 : 0);
  } else if (a.is_numeric() && b.is_numeric()) {
    double x = a.to_double(), y = b.to_double();
    cmp = x < y ? -1 : (x > y ? 1 : 0);
  } else {
    throw TypeError("cannot compare a string with a number");
  }
  switch (op) {
  case BinaryOp::Eq:
    return from_bool(cmp == 0);
  case BinaryOp::Ne:
    return from_bool(cmp != 0);
  case BinaryOp::Lt:
    return from_bool(cmp < 0);
  case BinaryOp::Le:
    return from_bool(cmp <= 0);
  case BinaryOp::Gt:
    return from_bool(cmp > 0);
  default:
    return from_bool(cmp >= 0);
  }
}

Value combine(BinaryOp op, const Value &a, const Value &b) {
  switch (op) {
  case BinaryOp::Add:
  case BinaryOp::Sub:
  case BinaryOp::Mul:
  case BinaryOp::Div:
    return arithmetic(op, a, b);
  case BinaryOp::And: {
    auto x = truth(a), y = truth(b);
    if ((x && !*x) || (y && !*y))
      return from_bool(false);
    if (x && y)
      return from_bool(true);
    return Null{};
  }
  case BinaryOp::Or: {
    auto x = truth(a), y = truth(b);
    if ((x && *x) || (y && *y))
      return from_bool(true);
    if (x && y)
      return from_bool(false);
    return Null{};
  }
  default:
    return compare(op, a, b);
  }
}

Value negate(const Value &v) {
  if (v.is_null())
    return Null{};
  if (v.is_int()) {
    if (v.as_int() == std::numeric_limits<std::int64_t>::min())
      throw TypeError("integer overflow in negation");
    return -v.as_int();
  }
  return -v.as_float();
}

// Aggregates ---------------------------------------------------------------

struct RowSet {
  const Table &table;
  const std::vector<std::size_t> &rows;
};

Value eval_with_aggregates(const Expr &e, const RowSet &rs);

Value aggregate(const Call &c, const RowSet &rs) {
  const Table &t = rs.table;
  switch (c.function) {
  case Function::Count: {
    if (c.args[0].is<Star>())
      return static_cast<std::int64_t>(rs.rows.size());
    std::int64_t n = 0;
    for (auto r : rs.rows)
      if (!evaluate(c.args[0], t, r).is_null())
        ++n;
    return n;
  }
  case Function::Sum: {
    bool any = false, is_float = false;
    std::int64_t isum = 0;
    double fsum = 0.0;
    for (auto r : rs.rows) {
      Value v = evaluate(c.args[0], t, r);
      if (v.is_null())
        continue;
      any = true;
      if (v.is_float()) {
        if (!is_float) {
          is_float = true;
          fsum = static_cast<double>(isum);
        }
        fsum += v.as_float();
      } else if (is_float) {
        fsum += v.to_double();
      } else if (__builtin_add_overflow(isum, v.as_int(), &isum)) {
        throw TypeError("integer overflow in SUM");
      }
    }
    if (!any)
      return Null{};
    if (is_float)
      return fsum;
    return isum;
  }
  case Function::Avg: {
    double sum = 0.0;
    std::size_t n = 0;
    for (auto r : rs.rows) {
      Value v = evaluate(c.args[0], t, r);
      if (v.is_null())
        continue;
      sum += v.to_double();
      ++n;
    }
    if (n == 0)
      return Null{};
    return sum / static_cast<double>(n);
  }
  case Function::Corr: {
    std::vector<double> xs, ys;
    for (auto r : rs.rows) {
      Value x = evaluate(c.args[0], t, r);
      Value y = evaluate(c.args[1], t, r);
      if (x.is_null() || y.is_null())
        continue;
      xs.push_back(x.to_double());
      ys.push_back(y.to_double());
    }
    auto rho = pearson(xs, ys);
    if (!rho)
      return Null{};
    return *rho;
  }
  case Function::Coalesce:
    break;
  }
  throw TypeError("not an aggregate");
}

Value eval_with_aggregates(const Expr &e, const RowSet &rs) {
  return std::visit(
      [&](const auto &n) -> Value {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, NumberLit>) {
          if (n.integral && std::fabs(n.value) < 9.2e18)
            return static_cast<std::int64_t>(n.value);
          return n.value;
        } else if constexpr (std::is_same_v<T, StringLit>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, NullLit>) {
          return Null{};
        } else if constexpr (std::is_same_v<T, ColumnRef> || std::is_same_v<T, Star>) {
          throw MixError("column reference outside an aggregate in an aggregate query");
        } else if constexpr (std::is_same_v<T, Unary>) {
          Value v = eval_with_aggregates(*n.operand, rs);
          if (n.op == UnaryOp::Negate)
            return negate(v);
          auto b = truth(v);
          return b ? from_bool(!*b) : Value(Null{});
        } else if constexpr (std::is_same_v<T, Binary>) {
          return combine(n.op, eval_with_aggregates(*n.lhs, rs),
                         eval_with_aggregates(*n.rhs, rs));
        } else if constexpr (std::is_same_v<T, IsNull>) {
          bool null = eval_with_aggregates(*n.operand, rs).is_null();
          return from_bool(n.negated ? !null : null);
        } else if constexpr (std::is_same_v<T, Case>) {
          for (const auto &w : n.whens) {
            auto b = truth(eval_with_aggregates(*w.condition, rs));
            if (b && *b)
              return eval_with_aggregates(*w.result, rs);
          }
          if (n.otherwise)
            return eval_with_aggregates(**n.otherwise, rs);
          return Null{};
        } else {
          if (is_aggregate(n.function))
            return aggregate(n, rs);
          for (const auto &a : n.args) {
            Value v = eval_with_aggregates(a, rs);
            if (!v.is_null())
              return v;
          }
          return Null{};
        }
      },
      e.node);
}

/// True when the expression reads a column outside of any aggregate call.
bool references_rows(const Expr &e) {
  return std::visit(
      [](const auto &n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ColumnRef> || std::is_same_v<T, Star>) {
          return true;
        } else if constexpr (std::is_same_v<T, Unary>) {
          return references_rows(*n.operand);
        } else if constexpr (std::is_same_v<T, Binary>) {
          return references_rows(*n.lhs) || references_rows(*n.rhs);
        } else if constexpr (std::is_same_v<T, IsNull>) {
          return references_rows(*n.operand);
        } else if constexpr (std::is_same_v<T, Case>) {
          for (const auto &w : n.whens)
            if (references_rows(*w.condition) || references_rows(*w.result))
              return true;
          return n.otherwise && references_rows(**n.otherwise);
        } else if constexpr (std::is_same_v<T, Call>) {
          if (is_aggregate(n.function))
            return false;
          for (const auto &a : n.args)
            if (references_rows(a))
              return true;
          return false;
        } else {
          return false;
        }
      },
      e.node);
}

std::string output_name(const SelectItem &item, std::size_t index, const Table &src) {
  if (item.alias)
    return *item.alias;
  if (item.expr.is<ColumnRef>())
    return src.column(item.expr.as<ColumnRef>().name).name();
  return "f" + std::to_string(index) + "_";
}

} // namespace

Value evaluate(const Expr &e, const Table &table, std::size_t row) {
  return std::visit(
      [&](const auto &n) -> Value {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ColumnRef>) {
          return table.column(n.name).at(row);
        } else if constexpr (std::is_same_v<T, NumberLit>) {
          if (n.integral && std::fabs(n.value) < 9.2e18)
            return static_cast<std::int64_t>(n.value);
          return n.value;
        } else if constexpr (std::is_same_v<T, StringLit>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, NullLit>) {
          return Null{};
        } else if constexpr (std::is_same_v<T, Star>) {
          throw TypeError("'*' is not valid in this position");
        } else if constexpr (std::is_same_v<T, Unary>) {
          Value v = evaluate(*n.operand, table, row);
          if (n.op == UnaryOp::Negate)
            return negate(v);
          auto b = truth(v);
          return b ? from_bool(!*b) : Value(Null{});
        } else if constexpr (std::is_same_v<T, Binary>) {
          // AND/OR short-circuit only on a definite result.
          Value a = evaluate(*n.lhs, table, row);
          if (n.op == BinaryOp::And) {
            auto x = truth(a);
            if (x && !*x)
              return from_bool(false);
          } else if (n.op == BinaryOp::Or) {
            auto x = truth(a);
            if (x && *x)
              return from_bool(true);
          }
          return combine(n.op, a, evaluate(*n.rhs, table, row));
        } else if constexpr (std::is_same_v<T, IsNull>) {
          bool null = evaluate(*n.operand, table, row).is_null();
          return from_bool(n.negated ? !null : null);
        } else if constexpr (std::is_same_v<T, Case>) {
          for (const auto &w : n.whens) {
            auto b = truth(evaluate(*w.condition, table, row));
            if (b && *b)
              return evaluate(*w.result, table, row);
          }
          if (n.otherwise)
            return evaluate(**n.otherwise, table, row);
          return Null{};
        } else {
          if (is_aggregate(n.function))
            throw MixError("aggregate function used in a row-level context");
          for (const auto &a : n.args) {
            Value v = evaluate(a, table, row);
            if (!v.is_null())
              return v;
          }
          return Null{};
        }
      },
      e.node);
}

Table execute_select(const SelectStmt &stmt, const Table &source) {
  // Type-check everything up front so errors surface even on empty tables.
  if (stmt.where) {
    require_boolean(type_of(*stmt.where, source), "WHERE");
  }
  bool any_aggregate = false, any_row_level = false;
  std::vector<Kind> kinds(stmt.items.size(), Kind::Null);
  for (std::size_t i = 0; i < stmt.items.size(); ++i) {
    const Expr &e = stmt.items[i].expr;
    if (e.is<Star>()) {
      any_row_level = true;
      continue;
    }
    kinds[i] = type_of(e, source);
    bool agg = contains_aggregate(e);
    bool rows = references_rows(e);
    if (agg && rows)
      throw MixError("expression mixes aggregate and non-aggregate column references");
    any_aggregate |= agg;
    any_row_level |= rows;
  }
  if (any_aggregate && any_row_level)
    throw MixError("aggregate and non-aggregate projections cannot be mixed "
                   "(GROUP BY is not supported)");

  std::vector<std::size_t> rows;
  rows.reserve(source.row_count());
  for (std::size_t r = 0; r < source.row_count(); ++r) {
    if (stmt.where) {
      auto b = truth(evaluate(*stmt.where, source, r));
      if (!b || !*b)
        continue;
    }
    rows.push_back(r);
  }

  Table out;
  if (any_aggregate) {
    RowSet rs{source, rows};
    for (std::size_t i = 0; i < stmt.items.size(); ++i) {
      Column col(output_name(stmt.items[i], i, source), column_type_of(kinds[i]));
      col.append(eval_with_aggregates(stmt.items[i].expr, rs));
      out.add_column(std::move(col));
    }
    out.set_row_count(1);
    return out;
  }

  for (std::size_t i = 0; i < stmt.items.size(); ++i) {
    const auto &item = stmt.items[i];
    if (item.expr.is<Star>()) {
      for (const auto &c : source.columns())
        out.add_column(c.take(rows));
      continue;
    }
    if (item.expr.is<ColumnRef>()) {
      Column col = source.column(item.expr.as<ColumnRef>().name).take(rows);
      col.rename(output_name(item, i, source));
      out.add_column(std::move(col));
      continue;
    }
    Column col(output_name(item, i, source), column_type_of(kinds[i]));
    col.reserve(rows.size());
    for (auto r : rows)
      col.append(evaluate(item.expr, source, r));
    out.add_column(std::move(col));
  }
  out.set_row_count(rows.size());
  return out;
}

Table execute_select(const SelectStmt &stmt, const Catalog &catalog) {
  return execute_select(stmt, catalog.table(stmt.from.last()));
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw LengthError("CORR inputs differ in length");
  const std::size_t n = x.size();
  if (n < 2)
    return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    return std::nullopt;
  // Sample covariance over sample standard deviations; the (n-1) factors cancel.
  const double denom = static_cast<double>(n - 1);
  double r = (sxy / denom) / (std::sqrt(sxx / denom) * std::sqrt(syy / denom));
  return std::clamp(r, -1.0, 1.0);
}

std::optional<double> corr(const Column &x, const Column &y) {
  if (x.type() == ColumnType::String || y.type() == ColumnType::String)
    throw TypeError("CORR requires numeric columns");
  if (x.size() != y.size())
    throw LengthError("CORR inputs differ in length");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x.is_null(i) || y.is_null(i))
      continue;
    xs.push_back(x.numeric_at(i));
    ys.push_back(y.numeric_at(i));
  }
  return pearson(xs, ys);
}

} // namespace minibqml::query

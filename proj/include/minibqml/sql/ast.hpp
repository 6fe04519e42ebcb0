#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace minibqml::sql {

/// Heap-allocated value with deep copy and deep equality, for recursive nodes.
template <class T> class Box {
public:
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}
  Box(const Box &other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
  Box(Box &&) noexcept = default;
  Box &operator=(const Box &other) {
    ptr_ = std::make_unique<T>(*other.ptr_);
    return *this;
  }
  Box &operator=(Box &&) noexcept = default;

  T &operator*() { return *ptr_; }
  const T &operator*() const { return *ptr_; }
  T *operator->() { return ptr_.get(); }
  const T *operator->() const { return ptr_.get(); }

  bool operator==(const Box &other) const { return *ptr_ == *other.ptr_; }

private:
  std::unique_ptr<T> ptr_;
};

struct SourcePos {
  std::size_t line = 1;
  std::size_t column = 1;
};

struct Expr;

struct ColumnRef {
  std::string name;
  bool operator==(const ColumnRef &) const = default;
};

/// Numeric literal; `integral` records that the source spelling had no
/// fraction or exponent, so the value evaluates as INT64.
struct NumberLit {
  double value = 0.0;
  bool integral = false;
  bool operator==(const NumberLit &) const = default;
};

struct StringLit {
  std::string value;
  bool operator==(const StringLit &) const = default;
};

struct NullLit {
  bool operator==(const NullLit &) const = default;
};

struct Star {
  bool operator==(const Star &) const = default;
};

enum class UnaryOp { Negate, Not };

struct Unary {
  UnaryOp op;
  Box<Expr> operand;
  bool operator==(const Unary &) const = default;
};

enum class BinaryOp { Eq, Ne, Lt, Le, Gt, Ge, Add, Sub, Mul, Div, And, Or };

struct Binary {
  BinaryOp op;
  Box<Expr> lhs;
  Box<Expr> rhs;
  bool operator==(const Binary &) const = default;
};

struct IsNull {
  Box<Expr> operand;
  bool negated = false;
  bool operator==(const IsNull &) const = default;
};

struct WhenClause {
  Box<Expr> condition;
  Box<Expr> result;
  bool operator==(const WhenClause &) const = default;
};

struct Case {
  std::vector<WhenClause> whens;
  std::optional<Box<Expr>> otherwise;
  bool operator==(const Case &) const = default;
};

enum class Function { Coalesce, Count, Sum, Avg, Corr };

struct Call {
  Function function;
  std::vector<Expr> args;
  bool operator==(const Call &) const;
};

/// Expression node. Equality is structural and ignores source positions.
struct Expr {
  using Node = std::variant<ColumnRef, NumberLit, StringLit, NullLit, Star, Unary,
                            Binary, IsNull, Case, Call>;
  Node node;
  SourcePos pos;

  template <class T> bool is() const { return std::holds_alternative<T>(node); }
  template <class T> const T &as() const { return std::get<T>(node); }

  bool operator==(const Expr &other) const { return node == other.node; }
};

std::string_view function_name(Function f);
std::optional<Function> function_from_name(std::string_view name);
bool is_aggregate(Function f);
bool contains_aggregate(const Expr &e);
std::string_view binary_op_text(BinaryOp op);

/// `project.dataset.table`; only the last part is used for lookup.
struct QualifiedName {
  std::vector<std::string> parts;
  const std::string &last() const { return parts.back(); }
  bool operator==(const QualifiedName &) const = default;
};

struct SelectItem {
  Expr expr;
  std::optional<std::string> alias;
  bool operator==(const SelectItem &) const = default;
};

struct SelectStmt {
  std::vector<SelectItem> items;
  QualifiedName from;
  std::optional<Expr> where;
  bool operator==(const SelectStmt &) const = default;
};

using OptionValue = std::variant<NumberLit, std::string, std::vector<std::string>,
                                 std::vector<NumberLit>>;

/// Ordered OPTIONS(...) entries. Keys are stored lowercase.
struct OptionsMap {
  std::vector<std::pair<std::string, OptionValue>> entries;

  const OptionValue *find(std::string_view key) const;
  void set(std::string key, OptionValue value);
  bool operator==(const OptionsMap &) const = default;
};

struct CreateModelStmt {
  QualifiedName name;
  bool replace = false;
  OptionsMap options;
  SelectStmt query;
  bool operator==(const CreateModelStmt &) const = default;
};

struct CreateTableFromCsvStmt {
  QualifiedName name;
  bool replace = false;
  std::string path;
  bool operator==(const CreateTableFromCsvStmt &) const = default;
};

struct MlEvaluateStmt {
  QualifiedName model;
  std::optional<SelectStmt> input;
  bool operator==(const MlEvaluateStmt &) const = default;
};

struct MlPredictStmt {
  QualifiedName model;
  SelectStmt input;
  double threshold = 0.5;
  bool operator==(const MlPredictStmt &) const = default;
};

struct MlFeatureImportanceStmt {
  QualifiedName model;
  bool operator==(const MlFeatureImportanceStmt &) const = default;
};

struct MlRocCurveStmt {
  QualifiedName model;
  bool operator==(const MlRocCurveStmt &) const = default;
};

using Statement =
    std::variant<SelectStmt, CreateModelStmt, CreateTableFromCsvStmt, MlEvaluateStmt,
                 MlPredictStmt, MlFeatureImportanceStmt, MlRocCurveStmt>;

} // namespace minibqml::sql

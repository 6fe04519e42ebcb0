#include "minibqml/sql/parser.hpp"

#include "minibqml/error.hpp"
#include "minibqml/sql/options.hpp"
#include "minibqml/sql/token.hpp"
#include "minibqml/table.hpp"
#include "minibqml/value.hpp"

#include <algorithm>

namespace minibqml::sql {

namespace {

class Parser {
public:
  explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

  Statement statement() {
    Statement stmt = parse_statement_body();
    if (peek_symbol(";"))
      ++pos_;
    if (!at_end())
      fail("unexpected " + describe(current()) + " after end of statement",
           {"';'", "end of input"});
    return stmt;
  }

  Expr standalone_expression() {
    Expr e = expression();
    if (!at_end())
      fail("unexpected " + describe(current()) + " after expression", {"end of input"});
    return e;
  }

private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;

  // Token helpers ---------------------------------------------------------

  bool at_end() const { return pos_ >= tokens_.size(); }
  const Token &current() const { return tokens_[pos_]; }
  const Token *peek(std::size_t ahead = 0) const {
    return pos_ + ahead < tokens_.size() ? &tokens_[pos_ + ahead] : nullptr;
  }

  SourcePos here() const {
    if (!at_end())
      return {current().line, current().column};
    if (tokens_.empty())
      return {1, 1};
    return {tokens_.back().line, tokens_.back().column};
  }

  static std::string describe(const Token &t) {
    return std::string(to_string(t.kind)) + " '" + t.text + "'";
  }

  [[noreturn]] void fail(const std::string &message,
                         std::vector<std::string> expected = {}) const {
    SourcePos p = here();
    std::string full = message;
    if (!expected.empty()) {
      full += " (expected ";
      for (std::size_t i = 0; i < expected.size(); ++i)
        full += (i ? ", " : "") + expected[i];
      full += ")";
    }
    throw ParseError(full, p.line, p.column, std::move(expected));
  }

  [[noreturn]] void fail_expected(std::vector<std::string> expected) const {
    std::string found = at_end() ? "end of input" : describe(current());
    fail("unexpected " + found, std::move(expected));
  }

  bool peek_keyword(std::string_view kw, std::size_t ahead = 0) const {
    auto *t = peek(ahead);
    return t && t->is_keyword(kw);
  }
  bool peek_symbol(std::string_view sym, std::size_t ahead = 0) const {
    auto *t = peek(ahead);
    return t && t->is_symbol(sym);
  }
  bool peek_word(std::string_view word, std::size_t ahead = 0) const {
    auto *t = peek(ahead);
    return t && t->kind == TokenKind::Identifier && iequals(t->text, word);
  }
  bool peek_identifier(std::size_t ahead = 0) const {
    auto *t = peek(ahead);
    return t && (t->kind == TokenKind::Identifier ||
                 t->kind == TokenKind::QuotedIdentifier);
  }

  bool accept_keyword(std::string_view kw) {
    if (peek_keyword(kw)) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool accept_symbol(std::string_view sym) {
    if (peek_symbol(sym)) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect_keyword(std::string_view kw) {
    if (!accept_keyword(kw))
      fail_expected({std::string(kw)});
  }
  void expect_symbol(std::string_view sym) {
    if (!accept_symbol(sym))
      fail_expected({"'" + std::string(sym) + "'"});
  }
  void expect_word(std::string_view word) {
    if (!peek_word(word))
      fail_expected({std::string(word)});
    ++pos_;
  }

  std::string identifier() {
    if (!peek_identifier())
      fail_expected({"identifier"});
    return tokens_[pos_++].value();
  }

  QualifiedName qualified_name() {
    QualifiedName name;
    SourcePos start = here();
    do {
      if (!peek_identifier())
        fail_expected({"identifier"});
      const Token &t = tokens_[pos_++];
      std::string v = t.value();
      if (t.kind == TokenKind::QuotedIdentifier) {
        std::size_t begin = 0;
        while (true) {
          std::size_t dot = v.find('.', begin);
          std::string part = v.substr(begin, dot == std::string::npos ? dot : dot - begin);
          if (part.empty())
            throw ParseError("empty name part in " + t.text, t.line, t.column,
                             {"identifier"});
          name.parts.push_back(std::move(part));
          if (dot == std::string::npos)
            break;
          begin = dot + 1;
        }
      } else {
        name.parts.push_back(std::move(v));
      }
    } while (accept_symbol("."));
    if (name.parts.size() > 3)
      throw ParseError("qualified name has more than 3 parts", start.line, start.column);
    return name;
  }

  // Statements -------------------------------------------------------------

  enum class MlFunction { Evaluate, Predict, FeatureImportance, RocCurve };

  std::optional<MlFunction> peek_ml_function() const {
    if (!(peek_word("ML") && peek_symbol(".", 1) && peek_symbol("(", 3)))
      return std::nullopt;
    auto *t = peek(2);
    if (!t || t->kind != TokenKind::Identifier)
      return std::nullopt;
    if (iequals(t->text, "EVALUATE"))
      return MlFunction::Evaluate;
    if (iequals(t->text, "PREDICT"))
      return MlFunction::Predict;
    if (iequals(t->text, "FEATURE_IMPORTANCE"))
      return MlFunction::FeatureImportance;
    if (iequals(t->text, "ROC_CURVE"))
      return MlFunction::RocCurve;
    return std::nullopt;
  }

  Statement parse_statement_body() {
    if (peek_keyword("SELECT"))
      return select_or_ml();
    if (peek_keyword("CREATE"))
      return create();
    if (auto fn = peek_ml_function())
      return ml_call(*fn);
    fail_expected({"SELECT", "CREATE", "ML function"});
  }

  Statement select_or_ml() {
    // SELECT * FROM ML.fn(...) is the function form of an ML statement.
    if (peek_keyword("SELECT") && peek_symbol("*", 1) && peek_keyword("FROM", 2)) {
      std::size_t save = pos_;
      pos_ += 3;
      if (auto fn = peek_ml_function())
        return ml_call(*fn);
      pos_ = save;
    }
    return select();
  }

  SelectStmt select() {
    expect_keyword("SELECT");
    SelectStmt stmt;
    do {
      stmt.items.push_back(select_item());
    } while (accept_symbol(","));
    expect_keyword("FROM");
    if (peek_ml_function())
      fail("ML functions are only supported as SELECT * FROM ML.<function>(...)");
    stmt.from = qualified_name();
    if (accept_keyword("WHERE")) {
      stmt.where = expression();
      if (contains_aggregate(*stmt.where))
        fail("aggregate functions are not allowed in WHERE");
    }
    return stmt;
  }

  SelectItem select_item() {
    SourcePos p = here();
    if (accept_symbol("*"))
      return SelectItem{Expr{Star{}, p}, std::nullopt};
    SelectItem item{expression(), std::nullopt};
    if (accept_keyword("AS"))
      item.alias = identifier();
    else if (peek_identifier())
      item.alias = identifier();
    return item;
  }

  // Input to ML.EVALUATE / ML.PREDICT: (SELECT ...) or TABLE name.
  SelectStmt ml_input() {
    if (accept_keyword("TABLE")) {
      SelectStmt s;
      s.items.push_back(SelectItem{Expr{Star{}, here()}, std::nullopt});
      s.from = qualified_name();
      return s;
    }
    expect_symbol("(");
    SelectStmt s = select();
    expect_symbol(")");
    return s;
  }

  Statement ml_call(MlFunction fn) {
    pos_ += 3; // ML . NAME
    expect_symbol("(");
    expect_keyword("MODEL");
    QualifiedName model = qualified_name();
    Statement result;
    switch (fn) {
    case MlFunction::Evaluate: {
      MlEvaluateStmt s{model, std::nullopt};
      if (accept_symbol(","))
        s.input = ml_input();
      result = std::move(s);
      break;
    }
    case MlFunction::Predict: {
      if (!accept_symbol(","))
        fail_expected({"','"});
      MlPredictStmt s{model, ml_input(), 0.5};
      if (accept_symbol(",")) {
        expect_word("STRUCT");
        expect_symbol("(");
        SourcePos p = here();
        NumberLit n = number_literal(true);
        expect_keyword("AS");
        if (!peek_word("threshold"))
          fail_expected({"threshold"});
        ++pos_;
        expect_symbol(")");
        if (!(n.value >= 0.0 && n.value <= 1.0))
          throw OptionError("threshold must lie in [0, 1]", p.line, p.column);
        s.threshold = n.value;
      }
      result = std::move(s);
      break;
    }
    case MlFunction::FeatureImportance:
      result = MlFeatureImportanceStmt{model};
      break;
    case MlFunction::RocCurve:
      result = MlRocCurveStmt{model};
      break;
    }
    expect_symbol(")");
    return result;
  }

  Statement create() {
    SourcePos create_pos = here();
    expect_keyword("CREATE");
    bool replace = false;
    if (accept_keyword("OR")) {
      expect_keyword("REPLACE");
      replace = true;
    }
    if (accept_keyword("TABLE")) {
      CreateTableFromCsvStmt s;
      s.replace = replace;
      s.name = qualified_name();
      expect_keyword("FROM");
      expect_word("CSV");
      if (at_end() || current().kind != TokenKind::StringLiteral)
        fail_expected({"string literal"});
      s.path = tokens_[pos_++].value();
      return s;
    }
    if (!accept_keyword("MODEL"))
      fail_expected({"MODEL", "TABLE"});
    CreateModelStmt s;
    s.replace = replace;
    s.name = qualified_name();
    if (accept_keyword("OPTIONS"))
      options(s.options);
    if (!s.options.find("model_type"))
      throw OptionError("option 'model_type' is required", create_pos.line,
                        create_pos.column);
    expect_keyword("AS");
    if (accept_symbol("(")) {
      s.query = select();
      expect_symbol(")");
    } else {
      s.query = select();
    }
    return s;
  }

  void options(OptionsMap &out) {
    expect_symbol("(");
    if (accept_symbol(")"))
      return;
    do {
      SourcePos p = here();
      std::string key = to_lower(identifier());
      expect_symbol("=");
      OptionValue value = option_value();
      if (out.find(key))
        throw OptionError("option '" + key + "' given more than once", p.line, p.column);
      out.entries.emplace_back(key, validate_option(key, std::move(value), p));
    } while (accept_symbol(","));
    expect_symbol(")");
  }

  NumberLit number_literal(bool allow_sign) {
    bool negative = false;
    if (allow_sign && accept_symbol("-"))
      negative = true;
    if (at_end() || current().kind != TokenKind::NumberLiteral)
      fail_expected({"number"});
    const Token &t = tokens_[pos_++];
    NumberLit n;
    n.value = *parse_real(t.text);
    n.integral = t.text.find_first_of(".eE") == std::string::npos;
    if (negative)
      n.value = -n.value;
    return n;
  }

  OptionValue option_value() {
    if (!at_end() && current().kind == TokenKind::StringLiteral)
      return tokens_[pos_++].value();
    if (accept_symbol("[")) {
      if (accept_symbol("]"))
        return std::vector<std::string>{};
      if (!at_end() && current().kind == TokenKind::StringLiteral) {
        std::vector<std::string> list;
        do {
          if (at_end() || current().kind != TokenKind::StringLiteral)
            fail_expected({"string literal"});
          list.push_back(tokens_[pos_++].value());
        } while (accept_symbol(","));
        expect_symbol("]");
        return list;
      }
      std::vector<NumberLit> list;
      do {
        list.push_back(number_literal(true));
      } while (accept_symbol(","));
      expect_symbol("]");
      return list;
    }
    if (peek_symbol("-") ||
        (!at_end() && current().kind == TokenKind::NumberLiteral))
      return number_literal(true);
    fail_expected({"string literal", "number", "'['"});
  }

  // Expressions ------------------------------------------------------------

  Expr expression() { return or_expr(); }

  Expr or_expr() {
    Expr lhs = and_expr();
    while (peek_keyword("OR")) {
      SourcePos p = here();
      ++pos_;
      Expr rhs = and_expr();
      lhs = Expr{Binary{BinaryOp::Or, std::move(lhs), std::move(rhs)}, p};
    }
    return lhs;
  }

  Expr and_expr() {
    Expr lhs = not_expr();
    while (peek_keyword("AND")) {
      SourcePos p = here();
      ++pos_;
      Expr rhs = not_expr();
      lhs = Expr{Binary{BinaryOp::And, std::move(lhs), std::move(rhs)}, p};
    }
    return lhs;
  }

  Expr not_expr() {
    if (peek_keyword("NOT")) {
      SourcePos p = here();
      ++pos_;
      return Expr{Unary{UnaryOp::Not, not_expr()}, p};
    }
    return comparison();
  }

  Expr comparison() {
    Expr lhs = additive();
    if (peek_keyword("IS")) {
      SourcePos p = here();
      ++pos_;
      bool negated = accept_keyword("NOT");
      expect_keyword("NULL");
      return Expr{IsNull{std::move(lhs), negated}, p};
    }
    static const std::pair<std::string_view, BinaryOp> ops[] = {
        {"=", BinaryOp::Eq}, {"<>", BinaryOp::Ne}, {"!=", BinaryOp::Ne},
        {"<", BinaryOp::Lt}, {"<=", BinaryOp::Le}, {">", BinaryOp::Gt},
        {">=", BinaryOp::Ge}};
    for (auto [sym, op] : ops) {
      if (peek_symbol(sym)) {
        SourcePos p = here();
        ++pos_;
        Expr rhs = additive();
        return Expr{Binary{op, std::move(lhs), std::move(rhs)}, p};
      }
    }
    return lhs;
  }

  Expr additive() {
    Expr lhs = multiplicative();
    while (peek_symbol("+") || peek_symbol("-")) {
      SourcePos p = here();
      BinaryOp op = current().text == "+" ? BinaryOp::Add : BinaryOp::Sub;
      ++pos_;
      Expr rhs = multiplicative();
      lhs = Expr{Binary{op, std::move(lhs), std::move(rhs)}, p};
    }
    return lhs;
  }

  Expr multiplicative() {
    Expr lhs = unary();
    while (peek_symbol("*") || peek_symbol("/")) {
      SourcePos p = here();
      BinaryOp op = current().text == "*" ? BinaryOp::Mul : BinaryOp::Div;
      ++pos_;
      Expr rhs = unary();
      lhs = Expr{Binary{op, std::move(lhs), std::move(rhs)}, p};
    }
    return lhs;
  }

  Expr unary() {
    if (peek_symbol("-")) {
      SourcePos p = here();
      ++pos_;
      return Expr{Unary{UnaryOp::Negate, unary()}, p};
    }
    return primary();
  }

  Expr primary() {
    SourcePos p = here();
    if (at_end())
      fail_expected({"expression"});
    const Token &t = current();
    switch (t.kind) {
    case TokenKind::NumberLiteral:
      return Expr{number_literal(false), p};
    case TokenKind::StringLiteral:
      ++pos_;
      return Expr{StringLit{t.value()}, p};
    case TokenKind::Keyword:
      if (accept_keyword("NULL"))
        return Expr{NullLit{}, p};
      if (peek_keyword("CASE"))
        return case_expr();
      break;
    case TokenKind::Identifier:
      if (peek_symbol("(", 1))
        return call();
      [[fallthrough]];
    case TokenKind::QuotedIdentifier: {
      std::string name = identifier();
      if (peek_symbol("."))
        fail("qualified column references are not supported");
      return Expr{ColumnRef{std::move(name)}, p};
    }
    case TokenKind::Symbol:
      if (accept_symbol("(")) {
        Expr inner = expression();
        expect_symbol(")");
        return inner;
      }
      break;
    }
    fail_expected({"expression"});
  }

  Expr case_expr() {
    SourcePos p = here();
    expect_keyword("CASE");
    Case c;
    if (!peek_keyword("WHEN"))
      fail_expected({"WHEN"});
    while (accept_keyword("WHEN")) {
      Expr cond = expression();
      expect_keyword("THEN");
      Expr result = expression();
      c.whens.push_back(WhenClause{std::move(cond), std::move(result)});
    }
    if (accept_keyword("ELSE"))
      c.otherwise = Box<Expr>(expression());
    expect_keyword("END");
    return Expr{std::move(c), p};
  }

  Expr call() {
    SourcePos p = here();
    const Token &name_tok = tokens_[pos_];
    auto fn = function_from_name(name_tok.text);
    if (!fn)
      fail("unknown function '" + name_tok.text + "'",
           {"COALESCE", "COUNT", "SUM", "AVG", "CORR"});
    pos_ += 2; // name (
    Call c{*fn, {}};
    if (*fn == Function::Count && peek_symbol("*")) {
      c.args.push_back(Expr{Star{}, here()});
      ++pos_;
    } else if (!peek_symbol(")")) {
      do {
        c.args.push_back(expression());
      } while (accept_symbol(","));
    }
    expect_symbol(")");

    std::size_t want_min = 1, want_max = 1;
    if (*fn == Function::Coalesce)
      want_max = static_cast<std::size_t>(-1);
    if (*fn == Function::Corr)
      want_min = want_max = 2;
    if (c.args.size() < want_min || c.args.size() > want_max)
      throw ParseError(std::string(function_name(*fn)) + " called with " +
                           std::to_string(c.args.size()) + " argument(s)",
                       p.line, p.column);
    if (is_aggregate(*fn))
      for (const auto &a : c.args)
        if (contains_aggregate(a))
          throw ParseError("aggregate functions cannot be nested", p.line, p.column);
    return Expr{std::move(c), p};
  }
};

} // namespace

Statement parse_statement(std::string_view text) { return Parser(text).statement(); }

Expr parse_expression(std::string_view text) {
  return Parser(text).standalone_expression();
}

} // namespace minibqml::sql

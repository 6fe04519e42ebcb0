#pragma once

#include "minibqml/sql/ast.hpp"

#include <string>
#include <string_view>

namespace minibqml::sql {

/// Parses exactly one statement, optionally terminated by `;`.
///
/// Grammar (keywords case-insensitive, identifiers may be backtick-quoted):
///
///   SELECT item [, item]* FROM name [WHERE expr]
///   CREATE [OR REPLACE] MODEL name [OPTIONS(key = value, ...)] AS select
///   CREATE [OR REPLACE] TABLE name FROM CSV 'path'
///   [SELECT * FROM] ML.EVALUATE(MODEL name [, (select) | TABLE name])
///   [SELECT * FROM] ML.PREDICT(MODEL name, (select) | TABLE name
///                              [, STRUCT(p AS threshold)])
///   [SELECT * FROM] ML.FEATURE_IMPORTANCE(MODEL name)
///   [SELECT * FROM] ML.ROC_CURVE(MODEL name)
///
/// Throws LexError, ParseError (with the expected-token set) or OptionError.
Statement parse_statement(std::string_view text);

/// Parses a standalone expression; used by tests and the REPL.
Expr parse_expression(std::string_view text);

/// Canonical text for a statement: parse_statement(pretty_print(s)) == s.
std::string pretty_print(const Statement &stmt);
std::string pretty_print(const SelectStmt &stmt);
std::string pretty_print(const Expr &expr);

} // namespace minibqml::sql

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace minibqml::sql {

enum class TokenKind {
  Keyword,
  Identifier,
  QuotedIdentifier,
  StringLiteral,
  NumberLiteral,
  Symbol,
};

std::string_view to_string(TokenKind kind);

/// `text` is the exact source slice, quotes included, so the input can be
/// rebuilt from the tokens plus the gaps between them. Keyword text keeps the
/// source spelling; compare keywords with `is_keyword`.
struct Token {
  TokenKind kind;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t offset = 0;

  bool is_keyword(std::string_view upper) const;
  bool is_symbol(std::string_view sym) const {
    return kind == TokenKind::Symbol && text == sym;
  }
  /// Identifier or literal content with quoting removed and escapes resolved.
  std::string value() const;

  bool operator==(const Token &) const = default;
};

bool is_reserved_keyword(std::string_view word);

/// Tokenizes SQL text, skipping whitespace and `--` comments.
/// Throws LexError on an unterminated literal or an illegal character.
std::vector<Token> tokenize(std::string_view text);

} // namespace minibqml::sql

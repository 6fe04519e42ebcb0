#include "minibqml/sql/token.hpp"

#include "minibqml/error.hpp"
#include "minibqml/table.hpp"

#include <array>
#include <cctype>

namespace minibqml::sql {

namespace {

constexpr std::array kKeywords = {
    "AND",  "AS",   "CASE",    "CREATE", "ELSE",    "END",   "FROM",
    "IS",   "MODEL", "NOT",    "NULL",   "OPTIONS", "OR",    "REPLACE",
    "SELECT", "TABLE", "THEN", "WHEN",   "WHERE",
};

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

} // namespace

std::string_view to_string(TokenKind kind) {
  switch (kind) {
  case TokenKind::Keyword:
    return "keyword";
  case TokenKind::Identifier:
    return "identifier";
  case TokenKind::QuotedIdentifier:
    return "quoted-identifier";
  case TokenKind::StringLiteral:
    return "string-literal";
  case TokenKind::NumberLiteral:
    return "number-literal";
  case TokenKind::Symbol:
    return "symbol";
  }
  return "?";
}

bool is_reserved_keyword(std::string_view word) {
  for (std::string_view k : kKeywords)
    if (iequals(k, word))
      return true;
  return false;
}

bool Token::is_keyword(std::string_view upper) const {
  return kind == TokenKind::Keyword && iequals(text, upper);
}

std::string Token::value() const {
  switch (kind) {
  case TokenKind::QuotedIdentifier:
    return text.substr(1, text.size() - 2);
  case TokenKind::StringLiteral: {
    const char quote = text.front();
    std::string out;
    for (std::size_t i = 1; i + 1 < text.size(); ++i) {
      out += text[i];
      if (text[i] == quote)
        ++i; // doubled quote
    }
    return out;
  }
  default:
    return text;
  }
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0, line = 1, col = 1;

  auto advance = [&](std::size_t count) {
    for (std::size_t k = 0; k < count; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto emit = [&](TokenKind kind, std::size_t len) {
    tokens.push_back(Token{kind, std::string(text.substr(i, len)), line, col, i});
    advance(len);
  };

  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '-') {
      while (i < text.size() && text[i] != '\n')
        advance(1);
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j]))
        ++j;
      auto word = text.substr(i, j - i);
      emit(is_reserved_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier,
           j - i);
      continue;
    }
    if (digit(c) || (c == '.' && i + 1 < text.size() && digit(text[i + 1]))) {
      std::size_t j = i;
      while (j < text.size() && digit(text[j]))
        ++j;
      if (j < text.size() && text[j] == '.') {
        ++j;
        while (j < text.size() && digit(text[j]))
          ++j;
      }
      if (j < text.size() && (text[j] == 'e' || text[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < text.size() && (text[k] == '+' || text[k] == '-'))
          ++k;
        if (k < text.size() && digit(text[k])) {
          while (k < text.size() && digit(text[k]))
            ++k;
          j = k;
        }
      }
      if (j < text.size() && ident_start(text[j]))
        throw LexError("malformed number literal", line, col);
      emit(TokenKind::NumberLiteral, j - i);
      continue;
    }
    if (c == '\'' || c == '"') {
      std::size_t j = i + 1;
      bool closed = false;
      while (j < text.size()) {
        if (text[j] == c) {
          if (j + 1 < text.size() && text[j + 1] == c) {
            j += 2;
            continue;
          }
          closed = true;
          ++j;
          break;
        }
        ++j;
      }
      if (!closed)
        throw LexError("unterminated string literal", line, col);
      emit(TokenKind::StringLiteral, j - i);
      continue;
    }
    if (c == '`') {
      std::size_t j = text.find('`', i + 1);
      if (j == std::string_view::npos)
        throw LexError("unterminated quoted identifier", line, col);
      if (j == i + 1)
        throw LexError("empty quoted identifier", line, col);
      emit(TokenKind::QuotedIdentifier, j - i + 1);
      continue;
    }
    if (i + 1 < text.size()) {
      auto two = text.substr(i, 2);
      if (two == "<=" || two == ">=" || two == "<>" || two == "!=") {
        emit(TokenKind::Symbol, 2);
        continue;
      }
    }
    switch (c) {
    case '(':
    case ')':
    case ',':
    case ';':
    case '.':
    case '*':
    case '+':
    case '-':
    case '/':
    case '=':
    case '<':
    case '>':
    case '[':
    case ']':
      emit(TokenKind::Symbol, 1);
      continue;
    default:
      break;
    }
    std::string shown = std::isprint(static_cast<unsigned char>(c))
                            ? std::string(1, c)
                            : "byte 0x" + std::to_string(static_cast<unsigned char>(c));
    throw LexError("illegal character '" + shown + "'", line, col);
  }
  return tokens;
}

} // namespace minibqml::sql

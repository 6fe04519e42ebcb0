#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace minibqml {

/// Base class for every error raised by the engine. `kind()` is the short
/// category name printed by diagnostics (e.g. "ParseError").
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string &message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string &kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

/// Error that points at a location in SQL text (1-based line/column).
class PositionedError : public Error {
public:
  PositionedError(std::string kind, const std::string &message, std::size_t line,
                  std::size_t column)
      : Error(std::move(kind), message), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

class LexError : public PositionedError {
public:
  LexError(const std::string &message, std::size_t line, std::size_t column)
      : PositionedError("LexError", message, line, column) {}
};

class ParseError : public PositionedError {
public:
  ParseError(const std::string &message, std::size_t line, std::size_t column,
             std::vector<std::string> expected = {})
      : PositionedError("ParseError", message, line, column),
        expected_(std::move(expected)) {}

  const std::vector<std::string> &expected() const noexcept { return expected_; }

private:
  std::vector<std::string> expected_;
};

class OptionError : public PositionedError {
public:
  OptionError(const std::string &message, std::size_t line, std::size_t column)
      : PositionedError("OptionError", message, line, column) {}
};

#define MINIBQML_DEFINE_ERROR(Name)                                            \
  class Name : public Error {                                                  \
  public:                                                                      \
    explicit Name(const std::string &message) : Error(#Name, message) {}       \
  };

MINIBQML_DEFINE_ERROR(IoError)
MINIBQML_DEFINE_ERROR(CatalogError)
MINIBQML_DEFINE_ERROR(FormatError)
MINIBQML_DEFINE_ERROR(NameError)
MINIBQML_DEFINE_ERROR(TypeError)
MINIBQML_DEFINE_ERROR(MixError)
MINIBQML_DEFINE_ERROR(LabelError)
MINIBQML_DEFINE_ERROR(EmptyError)
MINIBQML_DEFINE_ERROR(SchemaError)
MINIBQML_DEFINE_ERROR(SplitError)
MINIBQML_DEFINE_ERROR(DataError)
MINIBQML_DEFINE_ERROR(LengthError)
MINIBQML_DEFINE_ERROR(DegenerateError)
MINIBQML_DEFINE_ERROR(ModelTypeError)

#undef MINIBQML_DEFINE_ERROR

/// CSV syntax problem; `row()` is the 1-based physical record number
/// (the header is record 1).
class CsvError : public Error {
public:
  CsvError(const std::string &message, std::size_t row)
      : Error("CsvError", message + " (row " + std::to_string(row) + ")"),
        row_(row) {}

  std::size_t row() const noexcept { return row_; }

private:
  std::size_t row_;
};

} // namespace minibqml

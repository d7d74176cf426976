#pragma once

#include <stdexcept>
#include <string>

namespace flw {

/// Base class for every error raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Syntax error in some source text, with a 1-based location.
struct ParseError : Error {
  ParseError(const std::string& what, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line(line),
        column(column) {}
  int line;
  int column;
};

/// Well-formed JSON that does not match the IR schema.
struct SchemaError : Error {
  SchemaError(const std::string& what, std::string field)
      : Error(what), field(std::move(field)) {}
  std::string field;
};

/// Type clash or occurs-check failure found by type inference.
struct TypeError : Error {
  TypeError(const std::string& what, std::string function)
      : Error(what), function(std::move(function)) {}
  std::string function;
};

}  // namespace flw

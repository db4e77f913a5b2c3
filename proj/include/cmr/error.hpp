#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cmr {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Operands built over different (m, n, l) variable layouts.
class LayoutError : public Error {
public:
  using Error::Error;
};

/// Malformed system or polynomial text. Line and column are 1-based.
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

/// Input that parses but violates a structural hypothesis (standard form,
/// order specification bounds, missing evaluation point, ...).
class ValidationError : public Error {
public:
  using Error::Error;
};

/// Resonance in a homological solve, or a fixed-point iteration that did not settle.
class SolverError : public Error {
public:
  using Error::Error;
};

/// Eigenvalue iteration failed to converge.
class SpectrumError : public Error {
public:
  using Error::Error;
};

}  // namespace cmr

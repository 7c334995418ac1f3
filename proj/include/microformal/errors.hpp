#pragma once

#include <stdexcept>
#include <string>

namespace microformal {

// Base of every error thrown by the engine.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Operands live in different variable contexts, or a variable is unknown.
class ContextError : public Error {
  public:
    using Error::Error;
};

// Mismatched truncations, degree guard exceeded, or a grade bound violated.
class TruncationError : public Error {
  public:
    using Error::Error;
};

// Operation needs a series with a given lambda-valuation or constant term.
class ValuationError : public Error {
  public:
    using Error::Error;
};

class MatrixError : public Error {
  public:
    using Error::Error;
};

// The composed exponent was not hbar-regular.
class CompositionError : public Error {
  public:
    using Error::Error;
};

// An internal consistency check failed (e.g. the stationary-point iteration
// did not settle). Always indicates a bug, never bad input.
class InternalError : public Error {
  public:
    using Error::Error;
};

class ParseError : public Error {
  public:
    ParseError(const std::string& message, std::size_t column)
        : Error(message + " at column " + std::to_string(column)), message_(message), column_(column) {}

    std::size_t column() const noexcept { return column_; }
    const std::string& message() const noexcept { return message_; }

  private:
    std::string message_;
    std::size_t column_;
};

// Well-formed input that violates a file-level rule (dimensions, h-powers...).
class ValidationError : public Error {
  public:
    using Error::Error;
};

} // namespace microformal

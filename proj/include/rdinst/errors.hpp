#pragma once

#include <stdexcept>
#include <string>

namespace rdinst {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ill-sorted term construction.
class SortError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unsupported SMT-LIB input. Carries a 1-based source position
/// when one is known (line 0 means "unknown").
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line = 0, int column = 0)
      : Error(line > 0 ? std::to_string(line) + ":" + std::to_string(column) + ": " + msg : msg),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Input ended in the middle of an s-expression.
class IncompleteInput : public ParseError {
 public:
  using ParseError::ParseError;
};

/// Input uses a construct outside the supported fragment (nested quantifiers
/// under atoms, arrays, bit-vectors, ...).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Failure talking to the external solver process.
class BackendError : public Error {
 public:
  using Error::Error;
};

/// A model returned by the backend is inconsistent with the declarations.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Ground evaluation failed (division by zero, free variable, ...).
class EvalError : public Error {
 public:
  using Error::Error;
};

}  // namespace rdinst

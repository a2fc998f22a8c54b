#pragma once

#include <stdexcept>
#include <string>

namespace bivirus {

enum class ErrorKind {
  Precondition,
  Domain,
  Numerical,
  Consistency,
  Parse,
  Validation,
};

const char* to_string(ErrorKind kind);

/// Base for every error raised by the library. The kind decides the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Input violates an operation's stated precondition (shape, sign, regime).
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(ErrorKind::Precondition, what) {}
};

/// State lies outside the invariant set beyond tolerance.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

/// Iteration budget exhausted, eigensolver failure, step-size underflow.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

/// A computed quantity contradicts a proven structural property.
class ConsistencyError : public Error {
 public:
  explicit ConsistencyError(const std::string& what) : Error(ErrorKind::Consistency, what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(ErrorKind::Parse, what) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what) : Error(ErrorKind::Validation, what) {}
};

}  // namespace bivirus

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ldcube {

// Base of every error thrown by the library. The CLI maps the subclasses
// onto its exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Requested index range exceeds what the generator's parameters support.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Unrandomized output requested without the explicit opt-in.
class PolicyError : public Error {
 public:
  using Error::Error;
};

// Randomization does not belong to the generator kind.
class IncompatibleRandomization : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
 public:
  explicit NotPositiveDefinite(std::size_t pivot)
      : Error("matrix is not positive definite (non-positive pivot at index " +
              std::to_string(pivot) + ")"),
        pivot_(pivot) {}

  std::size_t pivot() const { return pivot_; }

 private:
  std::size_t pivot_;
};

class SingularSystem : public Error {
 public:
  using Error::Error;
};

// Integrand produced a non-finite value, or a model evaluation failed.
class EvaluationError : public Error {
 public:
  EvaluationError(std::size_t row, const std::string& what)
      : Error("row " + std::to_string(row) + ": " + what), row_(row) {}

  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

class TransportError : public Error {
 public:
  using Error::Error;
};

class ProtocolError : public Error {
 public:
  using Error::Error;
};

}  // namespace ldcube

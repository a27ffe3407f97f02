#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace trilin {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t line, std::size_t column)
      : Error(message + " at " + std::to_string(line) + ":" + std::to_string(column)),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class UnknownIdentifier : public SyntaxError {
 public:
  UnknownIdentifier(const std::string& name, std::size_t line, std::size_t column)
      : SyntaxError("unknown identifier '" + name + "'", line, column), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class UnsupportedNode : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public Error {
 public:
  explicit DivisionByZero(const std::string& message = "division by zero") : Error(message) {}
};

class NegativeEvenRoot : public Error {
 public:
  explicit NegativeEvenRoot(const std::string& message = "even root of a negative number")
      : Error(message) {}
};

// Non-real values other than even roots (ln of a non-positive number).
class DomainError : public Error {
 public:
  using Error::Error;
};

class EvaluationDomain : public Error {
 public:
  using Error::Error;
};

class DegenerateTransformation : public Error {
 public:
  using Error::Error;
};

class NoClosedFormInverse : public Error {
 public:
  using Error::Error;
};

class WrongBranch : public Error {
 public:
  using Error::Error;
};

class NotPolynomialInJetVars : public Error {
 public:
  using Error::Error;
};

class SearchBudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace trilin

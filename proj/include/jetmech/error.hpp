#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace jetmech {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed user input: bad dimensions, forbidden variables, invalid flags.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Syntax error in the expression language.
class ParseError : public InputError {
 public:
  ParseError(std::size_t offset, std::string expected, const std::string& source);

  std::size_t offset() const { return offset_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

/// Raised while evaluating an expression.
class EvalError : public Error {
 public:
  using Error::Error;
};

class UnboundVariable : public EvalError {
 public:
  explicit UnboundVariable(std::string name);
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

/// An argument left the domain of a function (log, sqrt, division, real power).
class DomainError : public EvalError {
 public:
  DomainError(std::string node, std::string reason);
  const std::string& node() const { return node_; }

 private:
  std::string node_;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// The velocity Hessian of a Lagrangian is not invertible at the requested point.
class SingularLagrangian : public SingularMatrix {
 public:
  using SingularMatrix::SingularMatrix;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

/// Non-finite state during a fixed-step integration.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double last_good_t);
  double last_good_t() const { return last_good_t_; }

 private:
  double last_good_t_;
};

/// A documented precondition on the inputs does not hold (e.g. an off-shell trajectory).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ChartBoundary : public Error {
 public:
  using Error::Error;
};

class AtInfinity : public Error {
 public:
  using Error::Error;
};

class SpacelikeDirection : public Error {
 public:
  using Error::Error;
};

}  // namespace jetmech

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace npulse {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated. `field()` names the argument.
class InvalidInput : public Error {
 public:
  InvalidInput(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// An argument was outside the domain on which the quantity is defined.
class RangeError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// Non-finite values, failed eigendecompositions, root finder divergence.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// The phase solver exhausted its starts without meeting the tolerance.
class NoSolution : public NumericError {
 public:
  NoSolution(const std::string& what, double best_residual)
      : NumericError(what + " (best residual " + std::to_string(best_residual) + ")"),
        best_residual_(best_residual) {}
  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace npulse

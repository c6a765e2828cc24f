#pragma once

#include <stdexcept>
#include <string>

namespace dcor {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input data (shape mismatch, non-finite values).
class InputError : public Error {
 public:
  using Error::Error;
};

// Invalid run configuration (replicate counts, alternative parameters, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Input is well formed but the statistic is undefined on it.
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

// Matrix is singular or not positive definite at working tolerance.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

// A computed quantity violates a guaranteed mathematical property by more
// than roundoff can explain.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

// Requested feature combination is not supported (e.g. dimensions).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// Numerical integration did not reach the requested tolerance.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double best_estimate, double error_estimate)
      : Error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

}  // namespace dcor

#pragma once

#include <stdexcept>
#include <string>

namespace rds {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on a numeric argument was violated.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Point outside the domain of a kernel, map or sampler.
class DomainError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

class EmptyRequestError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

/// Fewer coefficients supplied than the truncation level needs.
class LengthError : public Error {
 public:
  using Error::Error;
};

/// A configured hard cap (truncation, retries) would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

class UndefinedEstimatorError : public Error {
 public:
  using Error::Error;
};

class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Assembled covariance is not PSD: indicates a bug, not bad input.
class KernelInconsistencyError : public Error {
 public:
  using Error::Error;
};

class DegenerateGridError : public Error {
 public:
  using Error::Error;
};

class DiscretizationError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

class AlignmentError : public Error {
 public:
  using Error::Error;
};

/// |f| fell below the guard modulus on a contour sample.
class BoundaryZeroError : public Error {
 public:
  using Error::Error;
};

class NonConvergenceError : public Error {
 public:
  using Error::Error;
};

class UnresolvableBoundaryError : public Error {
 public:
  using Error::Error;
};

class CoverageError : public Error {
 public:
  using Error::Error;
};

class PairingError : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment configuration; `line` is 0 for command-line keys.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& message, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace rds

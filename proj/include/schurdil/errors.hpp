#pragma once

#include <stdexcept>
#include <string>

namespace schurdil {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: wrong shapes, broken invariants, failed preconditions.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A requested dimension exceeds the configured cap or overflows an index.
class DimensionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// An iterative method did not reach its target.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// File or stream failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace schurdil

#pragma once

#include <stdexcept>
#include <string>

namespace biphase {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A call violated an operation's preconditions (wrong basis tag, too few
/// samples, non-uniform grid, empty plate list, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// An input value violates its type invariant (non-unit norm, |t|^2+|r|^2 != 1).
class InvalidInputError : public UsageError {
 public:
  using UsageError::UsageError;
};

/// Numerical failure while evaluating a well-formed request.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// The overlap entering a phase is below the orthogonality threshold, so
/// its argument is undefined.
class IndeterminatePhaseError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Endpoints of a requested geodesic lie on the same ray.
class DegenerateGeodesicError : public NumericError {
 public:
  using NumericError::NumericError;
};

class ConvergenceError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace biphase

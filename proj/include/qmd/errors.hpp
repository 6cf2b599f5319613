#pragma once

#include <stdexcept>
#include <string>

namespace qmd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not fit together (matrix sizes, outcome counts, ...).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A precondition on a numeric argument was violated (range, normalization).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An operator expected to be Hermitian deviates by more than the tolerance.
class NotHermitianError : public Error {
 public:
  NotHermitianError(const std::string& what, double deviation)
      : Error(what), deviation_(deviation) {}
  double deviation() const noexcept { return deviation_; }

 private:
  double deviation_;
};

/// An operator expected to be positive semidefinite has a negative eigenvalue
/// beyond the clamping tolerance.
class NotPositiveError : public Error {
 public:
  NotPositiveError(const std::string& what, double min_eigenvalue)
      : Error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

/// The requested discrimination task has no solution (for example unambiguous
/// discrimination of devices whose effects have fully overlapping supports).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Numerical routine failed to converge.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace qmd

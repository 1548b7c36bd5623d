#pragma once

#include <stdexcept>

namespace rabistark {

/// Base class for every failure raised by the library (except the
/// std::domain_error thrown by the special functions).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested truncated space is larger than the configured maximum.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An eigensolver did not meet its iteration budget or residual contract.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// No sign change of the displacement condition was found.
class NoRootError : public Error {
 public:
  using Error::Error;
};

/// Parameters outside the regime where an approximation is meaningful
/// (complex block eigenvalues, CO-limit guard, ...).
class RegimeError : public Error {
 public:
  using Error::Error;
};

/// The spectrum is unbounded from below, so ground-state observables do not exist.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// A parameter grid is too coarse to resolve the structure being measured.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace rabistark

#pragma once

#include <stdexcept>
#include <string>

namespace telenoise {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Matrix or vector input has the wrong shape.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A value that is required to vanish (imaginary residue, completeness
/// defect, purity violation) exceeded its tolerance.
class NumericConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the operation's domain (bad timestep, probability
/// outside [0,1], ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A stated precondition of an analytical result does not hold for the
/// given input (e.g. coherence ratio above 1/3).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Request would exceed a configured enumeration or qubit budget.
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

/// Division by a vanishing diagonal element; message names the location.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration or input file; message names the offending key.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace telenoise

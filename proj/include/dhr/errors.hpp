#pragma once

#include <stdexcept>
#include <string>

namespace dhr {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Caller broke a precondition (mismatched degrees, missing pieces, bad ranges).
class UsageError : public Error {
 public:
  using Error::Error;
};

// A computation could not establish a required certified fact.
class ComputeError : public Error {
 public:
  using Error::Error;
};

// Enclosures too wide to decide a sign or certify a floor; retry with more bits.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

// A query point straddles an integer piece boundary.
class AmbiguousBoundaryError : public Error {
 public:
  using Error::Error;
};

// A polynomial system with a vanishing discriminant or resultant.
class InvalidSystemError : public Error {
 public:
  using Error::Error;
};

// A census job exceeded what 64-bit factorisation can handle.
class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace dhr

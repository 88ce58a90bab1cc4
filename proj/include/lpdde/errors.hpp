#pragma once

#include <stdexcept>
#include <string>

namespace lpdde {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain where the operation is defined
/// (evaluation point outside [a,b], negative horizon, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A scalar parameter violates its contract (p < 1, nodes < 2, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Component counts or intervals of two operands do not match.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A precondition relating several inputs does not hold
/// (exponent bookkeeping, missing growth certificate, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

}  // namespace lpdde

#pragma once

#include <stdexcept>
#include <string>

namespace mvx {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape or dimension mismatch between operands.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Non-finite value produced by an operation, or a solver that failed to converge.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Caller broke a documented precondition (non-scalar backward, asymmetric input, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Request exceeds a documented size guard.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Malformed binary file.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Config parse or validation failure. The message starts with the key path.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Operation not defined for the given model class.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

}  // namespace mvx

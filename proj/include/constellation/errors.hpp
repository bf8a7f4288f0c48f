#pragma once

#include <stdexcept>
#include <string>

namespace constellation {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live in exterior algebras of different ambient dimension.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A quadrature rule cannot deliver the requested accuracy, or the integrand
/// produced non-finite values.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

/// Two independent evaluation routes disagree beyond tolerance.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

/// A request exceeds a configured size cap (dimension, subset count, ...).
class ResourceLimitExceeded : public Error {
 public:
  using Error::Error;
};

/// Malformed or semantically invalid configuration input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace constellation

#pragma once

#include <stdexcept>
#include <string>

namespace loggas {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or semantically invalid model specification.
class SpecError : public Error {
 public:
  using Error::Error;
};

/// Operation applied to a state or spec of the wrong dimension.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Two particles closer than the minimum-gap guard.
class CollisionError : public Error {
 public:
  using Error::Error;
};

/// A labeled state violates its label-order invariant.
class OrderingError : public Error {
 public:
  using Error::Error;
};

/// Time stepping could not produce a valid state.
class IntegrationError : public Error {
 public:
  using Error::Error;
};

/// Failure reading or writing an artifact.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace loggas

#pragma once

#include <stdexcept>
#include <string>

namespace primex {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Operands have incompatible lengths or matrix dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An operation was invoked out of its required order (e.g. non-monotonic time).
class SequencingError : public Error {
 public:
  using Error::Error;
};

/// A model matrix violates its contract (e.g. singular measurement noise).
class ModelError : public Error {
 public:
  using Error::Error;
};

/// A fusion result is invalid (e.g. indefinite pooled information matrix).
class FusionError : public Error {
 public:
  using Error::Error;
};

/// A protocol-level contract was violated (e.g. measurement given to a relay node).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// Scenario or topology configuration is invalid or infeasible.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An input exceeds a hard operational bound.
class BoundError : public Error {
 public:
  using Error::Error;
};

}  // namespace primex

#pragma once

#include <stdexcept>
#include <string>

namespace framescale {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Sizes of related arguments do not match.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input violates a documented precondition or type invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Input is degenerate for the requested operation (e.g. a zero operator).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// Problem size exceeds an enumeration cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Malformed serialized input.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Operation invoked on data that fails its contract.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace framescale

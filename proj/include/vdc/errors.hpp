#pragma once

#include <stdexcept>
#include <string>

namespace vdc {

/// Malformed input: dimension mismatch, bad shape, parse failure.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A mathematical hypothesis required by an operation does not hold
/// (degenerate reduction, non-smooth input, window with no good prime).
class HypothesisFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An enumeration or reduction budget was exceeded.
class ResourceExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vdc

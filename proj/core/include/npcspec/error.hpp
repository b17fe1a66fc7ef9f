#pragma once

#include <stdexcept>
#include <string>

namespace npcspec {

/// Raised when caller-supplied data or parameters violate a documented precondition.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a computation that should succeed on valid input breaks down
/// numerically (loss of positive definiteness, empty posterior row, ...).
class NumericFailure : public std::runtime_error {
 public:
  explicit NumericFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace npcspec

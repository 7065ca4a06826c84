#pragma once

#include <stdexcept>
#include <string>

namespace fieldback {

/// Raised when an input violates a documented precondition. The message
/// names the offending parameter.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical procedure cannot reach its requested tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ValidationError(message);
}

}  // namespace fieldback

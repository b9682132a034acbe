#pragma once

#include <stdexcept>
#include <string>

namespace agentarr {

// Malformed or inconsistent input: unknown vertex, illegal transfer, bad JSON.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A configured enumeration or search limit was exceeded. Never a silent truncation.
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The request is well formed but logically unsatisfiable, e.g. a plan between
// configurations that are not equivalent.
class LogicError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// An internal invariant failed. Indicates a bug, never expected on valid input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline void check_internal(bool condition, const std::string& what) {
  if (!condition) throw InternalError("internal invariant violated: " + what);
}

}  // namespace agentarr

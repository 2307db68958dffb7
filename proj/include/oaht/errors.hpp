#pragma once

#include <stdexcept>
#include <string>

namespace oaht {

// Precondition on an argument's value was violated.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Problem size exceeds an exhaustive-enumeration bound.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Operation called in the wrong object state (e.g. backward without forward).
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Non-finite value where a finite one is required.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace oaht

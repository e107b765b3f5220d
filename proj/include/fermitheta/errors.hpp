#pragma once

#include <stdexcept>
#include <string>

namespace fermitheta {

// Violated precondition on caller-supplied arguments.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// Request exceeds a dense or enumeration budget.
class CapacityError : public std::length_error {
 public:
  explicit CapacityError(const std::string& what) : std::length_error(what) {}
};

// An internal invariant failed (e.g. an LP that must be bounded was not).
class StructuralError : public std::logic_error {
 public:
  explicit StructuralError(const std::string& what) : std::logic_error(what) {}
};

// A projector annihilated every trial vector.
class DegeneracyError : public std::runtime_error {
 public:
  explicit DegeneracyError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fermitheta

#pragma once

#include <stdexcept>
#include <string>

namespace fide {

// Thrown when a computation cannot reach the requested accuracy or leaves
// the representable range (series cap hit, overflow in a basis matrix, ...).
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown by problem loading/validation; carries every violated constraint.
class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fide

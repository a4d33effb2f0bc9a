#pragma once

#include <stdexcept>

namespace neghappy {

/// Raised when an operation closed over nonnegative integers would produce
/// a negative value (detected in digit form by an even nonzero digit count).
class negative_result_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when materializing a quantity would exceed the caller's digit
/// budget.
class budget_exceeded_error : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Raised when a recursive construction exceeds its depth budget.
class depth_exceeded_error : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace neghappy

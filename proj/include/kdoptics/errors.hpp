#pragma once

#include <stdexcept>
#include <string>

namespace kdoptics {

/// A caller violated an operation's precondition (unphysical state, bad grid, ...).
class PreconditionError : public std::invalid_argument {
 public:
  explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

/// A computed result fell outside its stated numerical error budget.
class NumericalBudgetError : public std::runtime_error {
 public:
  explicit NumericalBudgetError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw PreconditionError(message);
}

}  // namespace kdoptics

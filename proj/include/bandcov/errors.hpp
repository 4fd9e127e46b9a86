#pragma once

#include <stdexcept>
#include <string>

namespace bandcov {

// Walk has the wrong shape: odd length that does not return to its start,
// or too short to describe a closed alternating walk.
struct ParityError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// The distinct steps of a walk do not form a tree.
struct NotATreeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Asymptotic formula evaluated outside the regime where it is meaningful.
struct RegimeViolation : std::domain_error {
  using std::domain_error::domain_error;
};

// Requested work exceeds a configured budget.
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Enumeration size cap hit (tree censuses and the like).
struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Iterative eigensolver failed to deflate; index reports the offending
// eigenvalue position.
struct ConvergenceFailure : std::runtime_error {
  int index;
  ConvergenceFailure(const std::string& what, int idx)
      : std::runtime_error(what), index(idx) {}
};

}  // namespace bandcov

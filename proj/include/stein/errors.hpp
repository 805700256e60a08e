#pragma once

#include <stdexcept>
#include <string>

namespace stein {

// Bad arguments: empty integration range, point outside the admissible
// region, invalid distribution parameters.
struct domain_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Adaptive scheme ran out of depth with the error estimate still above
// the requested target.
struct non_convergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Root bracketing failed: f has the same strict sign at both ends.
struct no_bracket : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A bound was requested for a test function that does not declare the
// norm the bound is built from.
struct missing_norm : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact enumeration refused: the state space is too large.
struct size_limit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace stein

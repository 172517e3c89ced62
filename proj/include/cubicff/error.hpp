#pragma once

#include <stdexcept>
#include <string>

namespace cubicff {

// Bad input: maps to exit code 2 in the CLI.
struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Something that should not happen on valid input (or a guard tripped).
struct ComputeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Search ran out of its jump / time allowance; the trap store is resumable.
struct BudgetExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cubicff

// Direct lazy big-step interpreter for the deterministic fragment: no `or`,
// no `free`, no logic variables.  Used as an oracle for the small-step
// evaluator.
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "flw/ir.hpp"
#include "support/terms.hpp"

namespace flw::testing {

/// The expression left the deterministic fragment.
struct OutsideFragment : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The reduction used up its fuel.
struct OutOfFuel : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BigStepResult {
  /// Normal form, or nullopt when the reduction fails (no matching
  /// branch, failed equation, `failed`, division by zero).
  std::optional<TermPtr> value;
  std::uint64_t reductions = 0;
};

/// Reduces `goal` (with no free variables) to normal form.
BigStepResult big_step(const Program& program, const ExprPtr& goal, std::uint64_t fuel = 1'000'000);

/// Convenience: parses `goal` with the library's goal parser first and
/// renders the value with show(), or returns nullopt on failure.
std::optional<std::string> big_step_text(const Program& program, const std::string& goal,
                                         std::uint64_t fuel = 1'000'000);

}  // namespace flw::testing

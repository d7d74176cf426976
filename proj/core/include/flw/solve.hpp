// Batch search over the alternatives produced by step().
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "flw/machine.hpp"

namespace flw {

enum class Strategy { Dfs, Bfs };

inline constexpr std::uint64_t kDefaultDepthLimit = 10000;
inline constexpr std::uint64_t kDefaultNodeLimit = 100000;

struct SolveOptions {
  Strategy strategy = Strategy::Dfs;
  /// Steps per branch (dfs) or states expanded in total (bfs); 0 selects
  /// the default for the strategy.
  std::uint64_t limit = 0;
  /// Stop after this many answers; 0 means all.
  std::size_t max_answers = 0;
};

struct Answer {
  std::vector<std::pair<std::string, std::string>> bindings;
  std::string value;

  /// `{x = 3, ys = [1,2]} Success`, or just the value without bindings.
  std::string text() const;
  friend bool operator==(const Answer&, const Answer&) = default;
};

struct SolveResult {
  std::vector<Answer> answers;
  bool floundered = false;
  bool budget_exhausted = false;
  std::size_t failures = 0;
  std::uint64_t expanded = 0;
};

Answer answer_of(const MachineState& s);

SolveResult solve(const MachineState& initial, const SolveOptions& options = {});
SolveResult solve(std::shared_ptr<const Program> program, std::string_view goal, const SolveOptions& options = {});

}  // namespace flw

#include "flw/solve.hpp"

#include <deque>

namespace flw {

std::string Answer::text() const {
  if (bindings.empty()) return value;
  std::string s = "{";
  for (std::size_t i = 0; i < bindings.size(); ++i)
    s += (i ? ", " : "") + bindings[i].first + " = " + bindings[i].second;
  return s + "} " + value;
}

Answer answer_of(const MachineState& s) {
  Answer a;
  for (const auto& [name, id] : s.answer_vars) a.bindings.emplace_back(name, show_term(s, id));
  a.value = show_term(s, s.root);
  return a;
}

namespace {

// Records a terminal state; returns false when the answer quota is full.
bool record(const MachineState& s, Outcome o, SolveResult& r, const SolveOptions& opt) {
  switch (o) {
    case Outcome::Success:
      r.answers.push_back(answer_of(s));
      return opt.max_answers == 0 || r.answers.size() < opt.max_answers;
    case Outcome::Failure: ++r.failures; return true;
    case Outcome::Floundered: r.floundered = true; return true;
    case Outcome::Running: break;
  }
  return true;
}

SolveResult dfs(const MachineState& initial, const SolveOptions& opt) {
  std::uint64_t limit = opt.limit ? opt.limit : kDefaultDepthLimit;
  SolveResult r;
  std::vector<MachineState> stack{initial};
  std::uint64_t base = initial.steps;
  while (!stack.empty()) {
    MachineState s = std::move(stack.back());
    stack.pop_back();
    Outcome o = is_terminal(s);
    if (o != Outcome::Running) {
      if (!record(s, o, r, opt)) return r;
      continue;
    }
    if (s.steps - base >= limit) {
      r.budget_exhausted = true;
      continue;
    }
    ++r.expanded;
    auto next = step(s);
    for (auto it = next.rbegin(); it != next.rend(); ++it) stack.push_back(std::move(it->state));
  }
  return r;
}

SolveResult bfs(const MachineState& initial, const SolveOptions& opt) {
  std::uint64_t limit = opt.limit ? opt.limit : kDefaultNodeLimit;
  SolveResult r;
  std::deque<MachineState> queue{initial};
  while (!queue.empty()) {
    MachineState s = std::move(queue.front());
    queue.pop_front();
    Outcome o = is_terminal(s);
    if (o != Outcome::Running) {
      if (!record(s, o, r, opt)) return r;
      continue;
    }
    if (r.expanded >= limit) {
      r.budget_exhausted = true;
      return r;
    }
    ++r.expanded;
    for (auto& x : step(s)) queue.push_back(std::move(x.state));
  }
  return r;
}

}  // namespace

SolveResult solve(const MachineState& initial, const SolveOptions& options) {
  return options.strategy == Strategy::Dfs ? dfs(initial, options) : bfs(initial, options);
}

SolveResult solve(std::shared_ptr<const Program> program, std::string_view goal, const SolveOptions& options) {
  return solve(inject(std::move(program), goal), options);
}

}  // namespace flw

// Navigable tree of machine states: lazy forward stepping, structural
// backward stepping, breakpoints on function names, and JSON export.
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "flw/machine.hpp"

namespace flw {

struct TraceError : Error {
  enum class Code { Terminal, OutOfRange, AtRoot, Malformed };
  TraceError(Code code, const std::string& what) : Error(what), code(code) {}
  Code code;
};

/// One node of a rendered expression tree.  Shared heap nodes appear once
/// per reference, each occurrence carrying the same id and `shared` set.
struct RenderedNode {
  NodeId id = kNoNode;
  std::string kind;  // var, lit, cons, fun, part, case, fcase, or, apply, and, elided
  std::string label;
  bool shared = false;
  std::vector<RenderedNode> children;
};

struct RenderedTask {
  int id = 0;
  bool active = true;
  NodeId goal = kNoNode;
  NodeId waiting_on = kNoNode;
};

struct RenderedStep {
  int node = 0;  // trace node id
  RenderedNode tree;
  std::optional<NodeId> redex;  // next redex, none when terminal
  std::string kind;             // kind of the next step, empty when terminal
  std::string function;         // head of the next redex when it is a call
  std::vector<NodeId> to_bind;  // variables the next step binds
  std::vector<RenderedTask> tasks;
  std::string terminal;  // running, success, failure, floundered
  std::uint64_t steps = 0;
  std::size_t alternatives = 0;
  std::optional<std::string> answer;  // success states only
  std::string note;
};

/// Deterministic JSON text of a rendered step.
std::string to_json(const RenderedStep& r);

/// Expressions deeper than this are elided except on paths to the redex
/// and to variables about to be bound.
inline constexpr int kRenderDepth = 100;

RenderedStep render_state(const MachineState& s, int trace_node = 0, int max_depth = kRenderDepth);

struct TraceNode {
  int id = 0;
  MachineState state;
  std::optional<StepInfo> info;  // step from the parent
  int parent = -1;
  std::optional<std::vector<int>> children;  // computed on demand
  std::string note;
};

struct RunPolicy {
  enum class Kind { Breakpoint, Terminal, Steps };
  Kind kind = Kind::Terminal;
  std::uint64_t steps = 0;

  static RunPolicy breakpoint() { return {Kind::Breakpoint, 0}; }
  static RunPolicy terminal() { return {Kind::Terminal, 0}; }
  static RunPolicy count(std::uint64_t n) { return {Kind::Steps, n}; }
};

/// Accepts `breakpoint`, `terminal`, or `steps:N`.
std::optional<RunPolicy> parse_run_policy(std::string_view text);

class TraceSession {
 public:
  explicit TraceSession(MachineState initial);
  TraceSession(std::shared_ptr<const Program> program, std::string_view goal);

  int root() const { return 0; }
  int cursor() const { return cursor_; }
  const TraceNode& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<int>& history() const { return history_; }

  /// Child ids of `id`, stepping its state on first use.
  const std::vector<int>& children(int id);
  /// Number of step() calls made for node `id` (0 or 1).
  int step_calls(int id) const { return step_calls_.at(static_cast<std::size_t>(id)); }

  RenderedStep render() const;
  RenderedStep render(int id) const;

  /// Throws TraceError on terminal nodes and out-of-range indices.
  RenderedStep forward(std::size_t alternative);
  /// Throws TraceError at the root.
  RenderedStep backward();
  /// Follows alternative 0 until the policy fires; stepping stops at
  /// terminal nodes and after `max_steps`.
  RenderedStep run_to(RunPolicy policy, std::uint64_t max_steps = 100000);

  void set_breakpoint(const std::string& function) { breakpoints_.insert(function); }
  void clear_breakpoint(const std::string& function) { breakpoints_.erase(function); }
  const std::set<std::string>& breakpoints() const { return breakpoints_; }

  /// Every node visited so far in the trace wire format.
  std::string export_json() const;

 private:
  void move_to(int id);
  bool at_breakpoint(int id) const;

  std::vector<TraceNode> nodes_;
  std::vector<int> step_calls_;
  std::set<std::string> breakpoints_;
  std::vector<int> history_;
  int cursor_ = 0;
};

/// Parsed trace export.  States are kept as JSON text so that an export
/// can be re-serialized byte for byte.
struct ExportedNode {
  int id = 0;
  std::string state;  // JSON object text
  std::optional<StepInfo> info;
  std::vector<int> children;
  std::string terminal;
};

struct ExportedTrace {
  std::vector<ExportedNode> nodes;
  int root = 0;
  int cursor = 0;
};

/// Throws TraceError(Malformed) on invalid input.
ExportedTrace import_trace(std::string_view text);
std::string export_text(const ExportedTrace& t);

}  // namespace flw

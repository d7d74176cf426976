// Small-step evaluator: graph rewriting with sharing, narrowing on flexible
// cases, residuation on rigid cases and arithmetic, equational constraints,
// and concurrent conjunction.
//
// A MachineState is one alternative of a computation.  States are values:
// step() never mutates its input, and successor states share unchanged heap
// chunks with it.
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "flw/builtins.hpp"
#include "flw/ir.hpp"
#include "flw/persistent_vector.hpp"
#include "flw/surface.hpp"

namespace flw {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

struct EvalError : Error {
  using Error::Error;
};

enum class NodeKind {
  Unbound,  // logic variable
  Bound,    // variable bound to `target`
  Ind,      // rewritten to `target`
  Cons,     // constructor application
  Lit,      // integer
  Fun,      // saturated call of a program function or builtin
  Part,     // partial application, `value` arguments missing
  Case,     // args[0] is the scrutinee
  Or,       // args = {left, right}
  Apply,    // args = {function, argument}
  Join,     // concurrent conjunction being solved; args = {c1, c2}
};

/// Code and variable environment of an instantiated case expression.
struct CaseClosure {
  const Case* code = nullptr;
  std::shared_ptr<const std::vector<NodeId>> env;
  const std::vector<std::string>* names = nullptr;
};

struct HeapNode {
  NodeKind kind = NodeKind::Unbound;
  std::string_view name;  // variable, constructor, or function name
  std::int64_t value = 0;  // Lit value, Part missing count
  NodeId target = kNoNode;  // Bound, Ind
  std::vector<NodeId> args;
  const FuncDecl* fn = nullptr;
  const Builtin* builtin = nullptr;
  bool ctor = false;  // Part of a constructor
  CaseClosure closure;
};

using Heap = PersistentVector<HeapNode>;

enum class TaskStatus { Active, Suspended };

struct Task {
  int id = 0;
  NodeId goal = kNoNode;
  bool root = false;  // the initial goal, evaluated to normal form
  TaskStatus status = TaskStatus::Active;
  NodeId waiting_on = kNoNode;
  NodeId join = kNoNode;  // Join node this conjunct belongs to
};

struct GoalCode {
  ExprPtr expr;
  std::vector<std::string> var_names;
};

struct MachineState {
  std::shared_ptr<const Program> program;
  std::shared_ptr<const GoalCode> goal;
  Heap heap;
  NodeId root = kNoNode;
  std::vector<Task> tasks;
  std::size_t turn = 0;
  bool failed = false;
  /// Variables introduced by the goal's outermost `free`, in order.
  std::vector<std::pair<std::string, NodeId>> answer_vars;
  std::uint64_t steps = 0;
  int next_task_id = 1;

  const HeapNode& node(NodeId id) const { return heap[static_cast<std::size_t>(id)]; }
  /// Follows Bound and Ind links.
  NodeId deref(NodeId id) const;
};

enum class StepKind {
  FunctionUnfold,
  CaseSelect,
  CaseNarrow,
  OrSplit,
  ConstraintSolve,
  ApplySaturate,
  Suspend,
  Wake,
};

std::string_view to_string(StepKind k);
std::optional<StepKind> parse_step_kind(std::string_view s);

struct StepInfo {
  NodeId redex = kNoNode;
  StepKind kind = StepKind::FunctionUnfold;
  std::vector<std::pair<NodeId, NodeId>> bound;  // (variable, value)
  int task = 0;                                  // id of the stepping task
  std::vector<int> woken;                        // ids of tasks resumed
  bool failed = false;
  std::string function;  // head of a function-call redex, else empty
};

/// The step that step() would take next.
struct Plan {
  std::size_t task_index = 0;
  NodeId redex = kNoNode;
  StepKind kind = StepKind::FunctionUnfold;
  std::vector<NodeId> to_bind;
  std::string function;
  std::size_t alternatives = 1;
};

struct Successor {
  MachineState state;
  StepInfo info;
};

enum class Outcome { Running, Success, Failure, Floundered };
std::string_view to_string(Outcome o);

/// Builds the initial state.  A leading `free` in the goal declares the
/// answer variables.  Throws EvalError for unknown symbols.
MachineState inject(std::shared_ptr<const Program> program, std::shared_ptr<const GoalCode> goal);
MachineState inject(std::shared_ptr<const Program> program, const Goal& goal);
/// Parses the goal in surface syntax first.
MachineState inject(std::shared_ptr<const Program> program, std::string_view goal_text);

Outcome is_terminal(const MachineState& s);

/// nullopt for terminal states.
std::optional<Plan> plan(const MachineState& s);

/// All don't-know alternatives of one step.  A failing alternative appears
/// as a state with `failed` set.  Throws EvalError on terminal states.
std::vector<Successor> step(const MachineState& s);

/// Data term rendering: `[1,2]`, `Succ Z`, `(x : _7)`, `_7` for unbound
/// variables; unevaluated calls print as `f a b`.
std::string show_term(const MachineState& s, NodeId id);

/// True when `id` is built from constructors, literals, and variables only.
bool is_data(const MachineState& s, NodeId id);

}  // namespace flw

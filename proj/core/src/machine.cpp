#include "flw/machine.hpp"

#include <algorithm>
#include <map>

namespace flw {

NodeId MachineState::deref(NodeId id) const {
  for (;;) {
    const HeapNode& n = node(id);
    if (n.kind != NodeKind::Bound && n.kind != NodeKind::Ind) return id;
    id = n.target;
  }
}

std::string_view to_string(StepKind k) {
  switch (k) {
    case StepKind::FunctionUnfold: return "function-unfold";
    case StepKind::CaseSelect: return "case-select";
    case StepKind::CaseNarrow: return "case-narrow";
    case StepKind::OrSplit: return "or-split";
    case StepKind::ConstraintSolve: return "constraint-solve";
    case StepKind::ApplySaturate: return "apply-saturate";
    case StepKind::Suspend: return "suspend";
    case StepKind::Wake: return "wake";
  }
  return "";
}

std::optional<StepKind> parse_step_kind(std::string_view s) {
  for (StepKind k : {StepKind::FunctionUnfold, StepKind::CaseSelect, StepKind::CaseNarrow, StepKind::OrSplit,
                     StepKind::ConstraintSolve, StepKind::ApplySaturate, StepKind::Suspend, StepKind::Wake})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Running: return "running";
    case Outcome::Success: return "success";
    case Outcome::Failure: return "failure";
    case Outcome::Floundered: return "floundered";
  }
  return "";
}

namespace {

NodeId alloc(MachineState& s, HeapNode n) { return static_cast<NodeId>(s.heap.push_back(std::move(n))); }

HeapNode& mut(MachineState& s, NodeId id) { return s.heap.mut(static_cast<std::size_t>(id)); }

bool is_cons(const HeapNode& n, std::string_view name) { return n.kind == NodeKind::Cons && n.name == name; }

NodeId follow_ind(const MachineState& s, NodeId id) {
  while (s.node(id).kind == NodeKind::Ind) id = s.node(id).target;
  return id;
}

// Instantiates expressions on the heap.  Constructor terms and literals
// built by one instantiation are shared when syntactically identical.
class Builder {
 public:
  explicit Builder(MachineState& s) : s_(s) {}

  NodeId lit(std::int64_t v) {
    auto [it, fresh] = lits_.try_emplace(v, kNoNode);
    if (fresh) {
      HeapNode n;
      n.kind = NodeKind::Lit;
      n.value = v;
      it->second = alloc(s_, std::move(n));
    }
    return it->second;
  }

  NodeId cons(std::string_view name, std::vector<NodeId> args) {
    auto [it, fresh] = cons_.try_emplace({name, args}, kNoNode);
    if (fresh) {
      HeapNode n;
      n.kind = NodeKind::Cons;
      n.name = name;
      n.args = std::move(args);
      it->second = alloc(s_, std::move(n));
    }
    return it->second;
  }

  NodeId var(std::string_view name) {
    HeapNode n;
    n.kind = NodeKind::Unbound;
    n.name = name;
    return alloc(s_, std::move(n));
  }

  NodeId call(std::string_view name, std::vector<NodeId> args) {
    HeapNode n;
    n.kind = NodeKind::Fun;
    n.name = name;
    n.fn = s_.program->find_function(name);
    if (!n.fn) n.builtin = find_builtin(name);
    n.args = std::move(args);
    return alloc(s_, std::move(n));
  }

  NodeId build(const Expr& e, std::vector<NodeId>& env, const std::vector<std::string>* names) {
    return std::visit(
        [&](const auto& x) -> NodeId {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Var>) {
            NodeId id = env.at(static_cast<std::size_t>(x.id));
            if (id == kNoNode) throw EvalError("variable without binding in instantiated code");
            return id;
          } else if constexpr (std::is_same_v<T, Lit>) {
            return lit(x.value);
          } else if constexpr (std::is_same_v<T, Comb>) {
            std::vector<NodeId> args;
            for (const auto& a : x.args) args.push_back(build(*a, env, names));
            if (x.kind == CombKind::Cons) return cons(x.name, std::move(args));
            if (x.kind == CombKind::Fun) return call(x.name, std::move(args));
            HeapNode n;
            n.kind = NodeKind::Part;
            n.name = x.name;
            n.value = x.missing;
            n.ctor = s_.program->find_constructor(x.name).has_value();
            if (!n.ctor) {
              n.fn = s_.program->find_function(x.name);
              if (!n.fn) n.builtin = find_builtin(x.name);
            }
            n.args = std::move(args);
            return alloc(s_, std::move(n));
          } else if constexpr (std::is_same_v<T, Case>) {
            NodeId scrutinee = build(*x.scrutinee, env, names);
            HeapNode n;
            n.kind = NodeKind::Case;
            n.args = {scrutinee};
            n.closure = {&x, std::make_shared<const std::vector<NodeId>>(env), names};
            return alloc(s_, std::move(n));
          } else if constexpr (std::is_same_v<T, Or>) {
            NodeId l = build(*x.left, env, names);
            NodeId r = build(*x.right, env, names);
            HeapNode n;
            n.kind = NodeKind::Or;
            n.args = {l, r};
            return alloc(s_, std::move(n));
          } else if constexpr (std::is_same_v<T, Free>) {
            for (VarId v : x.vars)
              env.at(static_cast<std::size_t>(v)) = var(names ? std::string_view((*names)[static_cast<std::size_t>(v)]) : "");
            return build(*x.body, env, names);
          } else {
            NodeId f = build(*x.fn, env, names);
            NodeId a = build(*x.arg, env, names);
            HeapNode n;
            n.kind = NodeKind::Apply;
            n.args = {f, a};
            return alloc(s_, std::move(n));
          }
        },
        e.node);
  }

 private:
  MachineState& s_;
  std::map<std::pair<std::string_view, std::vector<NodeId>>, NodeId> cons_;
  std::map<std::int64_t, NodeId> lits_;
};

// Overwrites `n` with its contractum `m`.  A contractum allocated in the
// current step is moved into `n` so that rewriting does not build chains of
// indirections; older nodes may be shared and are referenced instead.
void rewrite(MachineState& s, NodeId n, NodeId m, NodeId fresh_from) {
  m = follow_ind(s, m);
  if (m >= fresh_from && s.node(m).kind != NodeKind::Unbound) {
    HeapNode copy = s.node(m);
    mut(s, n) = std::move(copy);
    return;
  }
  HeapNode ind;
  ind.kind = NodeKind::Ind;
  ind.target = m;
  mut(s, n) = std::move(ind);
}

void bind(MachineState& s, NodeId var, NodeId value, StepInfo& info) {
  HeapNode& n = mut(s, var);
  n.kind = NodeKind::Bound;
  n.target = value;
  info.bound.emplace_back(var, value);
}

NodeId success_node(MachineState& s) {
  HeapNode n;
  n.kind = NodeKind::Cons;
  n.name = kSuccess;
  return alloc(s, std::move(n));
}

// ---------------------------------------------------------------------------
// Demand

enum class Mode { Head, Normal };

struct Demand {
  enum Kind { Value, Redex, Suspend } kind;
  NodeId node;  // value, redex, or the variable suspended on
  NodeId by = kNoNode;  // Suspend: the node that needs the variable
};

Demand find(const MachineState& s, NodeId id, Mode mode) {
  id = s.deref(id);
  const HeapNode& n = s.node(id);
  switch (n.kind) {
    case NodeKind::Unbound:
    case NodeKind::Lit:
      return {Demand::Value, id};
    case NodeKind::Cons:
    case NodeKind::Part:
      if (mode == Mode::Normal)
        for (NodeId a : n.args) {
          Demand d = find(s, a, Mode::Normal);
          if (d.kind != Demand::Value) return d;
        }
      return {Demand::Value, id};
    case NodeKind::Fun: {
      if (n.fn) return {Demand::Redex, id};
      switch (n.builtin->op) {
        case BuiltinOp::Unify:
          for (NodeId a : n.args) {
            Demand d = find(s, a, Mode::Head);
            if (d.kind != Demand::Value) return d;
          }
          return {Demand::Redex, id};
        case BuiltinOp::ConcAnd:
        case BuiltinOp::Failed:
          return {Demand::Redex, id};
        case BuiltinOp::SeqAnd:
        case BuiltinOp::Cond: {
          Demand d = find(s, n.args[0], Mode::Head);
          if (d.kind != Demand::Value) return d;
          return {Demand::Redex, id};
        }
        default:
          for (NodeId a : n.args) {
            Demand d = find(s, a, Mode::Head);
            if (d.kind != Demand::Value) return d;
            if (s.node(d.node).kind == NodeKind::Unbound) return {Demand::Suspend, d.node, id};
          }
          return {Demand::Redex, id};
      }
    }
    case NodeKind::Case: {
      Demand d = find(s, n.args[0], Mode::Head);
      if (d.kind != Demand::Value) return d;
      if (s.node(d.node).kind == NodeKind::Unbound && n.closure.code->kind == CaseKind::Rigid)
        return {Demand::Suspend, d.node, id};
      return {Demand::Redex, id};
    }
    case NodeKind::Or:
      return {Demand::Redex, id};
    case NodeKind::Apply: {
      Demand d = find(s, n.args[0], Mode::Head);
      if (d.kind != Demand::Value) return d;
      if (s.node(d.node).kind == NodeKind::Unbound) return {Demand::Suspend, d.node, id};
      return {Demand::Redex, id};
    }
    case NodeKind::Join: {
      Demand d = find(s, n.args[0], Mode::Head);
      if (d.kind != Demand::Value) return d;
      return {Demand::Redex, id};
    }
    case NodeKind::Bound:
    case NodeKind::Ind:
      break;
  }
  return {Demand::Value, id};
}

// ---------------------------------------------------------------------------
// Unification of data terms

class Unifier {
 public:
  explicit Unifier(const MachineState& s) : s_(s) {}

  NodeId walk(NodeId x) const {
    x = s_.deref(x);
    for (auto it = sub_.find(x); it != sub_.end(); it = sub_.find(x)) x = s_.deref(it->second);
    return x;
  }

  bool unify(NodeId a, NodeId b) {
    a = walk(a);
    b = walk(b);
    if (a == b) return true;
    const HeapNode& x = s_.node(a);
    const HeapNode& y = s_.node(b);
    if (x.kind == NodeKind::Unbound) return bind(a, b);
    if (y.kind == NodeKind::Unbound) return bind(b, a);
    if (x.kind == NodeKind::Lit && y.kind == NodeKind::Lit) return x.value == y.value;
    if (x.kind != NodeKind::Cons || y.kind != NodeKind::Cons) return false;
    if (x.name != y.name || x.args.size() != y.args.size()) return false;
    for (std::size_t i = 0; i < x.args.size(); ++i)
      if (!unify(x.args[i], y.args[i])) return false;
    return true;
  }

  const std::vector<std::pair<NodeId, NodeId>>& bindings() const { return order_; }

 private:
  bool occurs(NodeId v, NodeId t) const {
    t = walk(t);
    if (t == v) return true;
    const HeapNode& n = s_.node(t);
    if (n.kind != NodeKind::Cons) return false;
    return std::any_of(n.args.begin(), n.args.end(), [&](NodeId a) { return occurs(v, a); });
  }

  bool bind(NodeId v, NodeId t) {
    if (occurs(v, t)) return false;
    sub_[v] = t;
    order_.emplace_back(v, t);
    return true;
  }

  const MachineState& s_;
  std::map<NodeId, NodeId> sub_;
  std::vector<std::pair<NodeId, NodeId>> order_;
};

// ---------------------------------------------------------------------------
// Planning

enum class Action { Unfold, Builtin, Select, Narrow, OrSplit, Unify, Spawn, BindSuccess, Saturate, Suspend };

struct Internal {
  std::size_t task_index;
  Action action;
  NodeId redex;
  NodeId var = kNoNode;  // Narrow, BindSuccess: scrutinee; Suspend: variable
};

std::optional<Internal> plan_internal(const MachineState& s) {
  if (is_terminal(s) != Outcome::Running) return std::nullopt;
  std::size_t count = s.tasks.size();
  std::size_t i = s.turn % count;
  for (std::size_t k = 0; k < count; ++k, i = (i + 1) % count)
    if (s.tasks[i].status == TaskStatus::Active) break;
  const Task& t = s.tasks[i];

  Demand d = find(s, t.goal, t.root ? Mode::Normal : Mode::Head);
  if (d.kind == Demand::Suspend) return Internal{i, Action::Suspend, d.by, d.node};
  if (d.kind == Demand::Value) {
    // A conjunct in head normal form that is not yet Success: a variable.
    return Internal{i, Action::BindSuccess, d.node, d.node};
  }
  NodeId r = d.node;
  const HeapNode& n = s.node(r);
  switch (n.kind) {
    case NodeKind::Fun:
      if (n.fn) return Internal{i, Action::Unfold, r};
      switch (n.builtin->op) {
        case BuiltinOp::Unify: return Internal{i, Action::Unify, r};
        case BuiltinOp::ConcAnd: return Internal{i, Action::Spawn, r};
        case BuiltinOp::SeqAnd:
        case BuiltinOp::Cond: {
          NodeId c = s.deref(n.args[0]);
          if (s.node(c).kind == NodeKind::Unbound) return Internal{i, Action::BindSuccess, r, c};
          return Internal{i, Action::Builtin, r};
        }
        default: return Internal{i, Action::Builtin, r};
      }
    case NodeKind::Case: {
      NodeId sc = s.deref(n.args[0]);
      if (s.node(sc).kind == NodeKind::Unbound) return Internal{i, Action::Narrow, r, sc};
      return Internal{i, Action::Select, r};
    }
    case NodeKind::Or: return Internal{i, Action::OrSplit, r};
    case NodeKind::Apply: return Internal{i, Action::Saturate, r};
    case NodeKind::Join: {
      NodeId c = s.deref(n.args[0]);
      if (s.node(c).kind == NodeKind::Unbound) return Internal{i, Action::BindSuccess, r, c};
      return Internal{i, Action::Builtin, r};
    }
    default: break;
  }
  throw EvalError("internal error: no step rule applies");
}

StepKind kind_of(Action a) {
  switch (a) {
    case Action::Unfold:
    case Action::Builtin:
    case Action::Spawn: return StepKind::FunctionUnfold;
    case Action::Select: return StepKind::CaseSelect;
    case Action::Narrow: return StepKind::CaseNarrow;
    case Action::OrSplit: return StepKind::OrSplit;
    case Action::Unify:
    case Action::BindSuccess: return StepKind::ConstraintSolve;
    case Action::Saturate: return StepKind::ApplySaturate;
    case Action::Suspend: return StepKind::Suspend;
  }
  return StepKind::FunctionUnfold;
}

std::string function_of(const MachineState& s, const Internal& p) {
  const HeapNode& n = s.node(p.redex);
  if (n.kind == NodeKind::Fun) return std::string(n.name);
  if (n.kind == NodeKind::Join) return "&";
  return {};
}

// Variables the unification at `redex` would bind, without binding them.
std::vector<NodeId> unify_targets(const MachineState& s, NodeId redex) {
  const HeapNode& n = s.node(redex);
  NodeId a = s.deref(n.args[0]);
  NodeId b = s.deref(n.args[1]);
  if (is_data(s, a) && is_data(s, b)) {
    Unifier u(s);
    if (!u.unify(a, b)) return {};
    std::vector<NodeId> out;
    for (const auto& [v, t] : u.bindings()) out.push_back(v);
    return out;
  }
  if (s.node(a).kind == NodeKind::Unbound) return {a};
  if (s.node(b).kind == NodeKind::Unbound) return {b};
  return {};
}

// ---------------------------------------------------------------------------
// Settling: completed conjunctions, wake-up, and task removal

void remove_task(MachineState& s, std::size_t index) {
  s.tasks.erase(s.tasks.begin() + static_cast<std::ptrdiff_t>(index));
  if (index < s.turn) --s.turn;
}

bool is_success(const MachineState& s, NodeId id) { return is_cons(s.node(s.deref(id)), kSuccess); }

void settle(MachineState& s, StepInfo* info) {
  if (s.failed) return;
  // Wake before joins are taken over, so a task merged into its parent
  // below is still reported.
  for (Task& t : s.tasks) {
    if (t.status != TaskStatus::Suspended) continue;
    if (s.node(s.deref(t.waiting_on)).kind == NodeKind::Unbound) continue;
    t.status = TaskStatus::Active;
    t.waiting_on = kNoNode;
    if (info) info->woken.push_back(t.id);
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < s.tasks.size() && !changed; ++i) {
      const Task& t = s.tasks[i];
      if (t.join == kNoNode) continue;
      const HeapNode& j = s.node(t.join);
      NodeId keep;
      if (is_success(s, j.args[1]))
        keep = j.args[0];
      else if (is_success(s, j.args[0]))
        keep = j.args[1];
      else
        continue;
      HeapNode ind;
      ind.kind = NodeKind::Ind;
      ind.target = keep;
      mut(s, t.join) = std::move(ind);
      remove_task(s, i);
      changed = true;
    }
  }
  for (const Task& t : s.tasks) {
    if (t.root) continue;
    const HeapNode& g = s.node(s.deref(t.goal));
    if (g.kind == NodeKind::Lit || g.kind == NodeKind::Part || (g.kind == NodeKind::Cons && g.name != kSuccess)) {
      s.failed = true;
      if (info) info->failed = true;
      return;
    }
  }
  s.root = follow_ind(s, s.root);
  for (std::size_t i = 0; i < s.tasks.size(); ++i) {
    Task& t = s.tasks[i];
    t.goal = follow_ind(s, t.goal);
    if (t.root && t.status == TaskStatus::Active && find(s, t.goal, Mode::Normal).kind == Demand::Value) {
      remove_task(s, i);
      --i;
    }
  }
  if (s.turn >= s.tasks.size()) s.turn = 0;
}

// ---------------------------------------------------------------------------
// Step rules

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t b) { return a - b * floor_div(a, b); }

class Stepper {
 public:
  Stepper(const MachineState& s, const Internal& p) : s_(s), p_(p) {}

  std::vector<Successor> run() {
    switch (p_.action) {
      case Action::Unfold: unfold(); break;
      case Action::Builtin: builtin(); break;
      case Action::Select: {
        Successor& x = start();
        select(x, p_.redex);
        break;
      }
      case Action::Narrow: narrow(); break;
      case Action::OrSplit:
        for (int k = 0; k < 2; ++k) {
          Successor& x = start();
          rewrite(x.state, p_.redex, x.state.node(p_.redex).args[static_cast<std::size_t>(k)], fresh_from(x));
        }
        break;
      case Action::Unify: unify(); break;
      case Action::Spawn: spawn(); break;
      case Action::BindSuccess: {
        Successor& x = start();
        bind(x.state, p_.var, success_node(x.state), x.info);
        break;
      }
      case Action::Saturate: saturate(); break;
      case Action::Suspend: {
        Successor& x = start();
        Task& t = x.state.tasks[p_.task_index];
        t.status = TaskStatus::Suspended;
        t.waiting_on = p_.var;
        break;
      }
    }
    for (auto& x : out_) finish(x);
    return std::move(out_);
  }

 private:
  Successor& start() {
    Successor x{s_, {}};
    x.state.steps += 1;
    x.info.redex = p_.redex;
    x.info.kind = kind_of(p_.action);
    x.info.task = s_.tasks[p_.task_index].id;
    x.info.function = function_of(s_, p_);
    out_.push_back(std::move(x));
    return out_.back();
  }

  static NodeId fresh_from(const Successor& x) { return static_cast<NodeId>(x.state.heap.size()); }

  static void fail(Successor& x) {
    x.state.failed = true;
    x.info.failed = true;
  }

  void finish(Successor& x) {
    if (x.state.failed) return;
    x.state.turn = p_.task_index + 1;
    settle(x.state, &x.info);
  }

  void unfold() {
    Successor& x = start();
    MachineState& st = x.state;
    NodeId from = fresh_from(x);
    const HeapNode& n = st.node(p_.redex);
    const Rule* rule = n.fn->as_rule();
    if (!rule) throw EvalError("cannot unfold external function `" + n.fn->name + "`");
    std::vector<NodeId> env(rule->var_names.size(), kNoNode);
    for (std::size_t k = 0; k < rule->params.size(); ++k) env[static_cast<std::size_t>(rule->params[k])] = n.args[k];
    Builder b(st);
    NodeId body = b.build(*rule->body, env, &rule->var_names);
    rewrite(st, p_.redex, body, from);
  }

  void select(Successor& x, NodeId redex) {
    MachineState& st = x.state;
    NodeId from = fresh_from(x);
    const HeapNode& n = st.node(redex);
    CaseClosure cl = n.closure;
    const HeapNode& sc = st.node(st.deref(n.args[0]));
    for (const Branch& br : cl.code->branches) {
      const Pattern& pat = br.pattern;
      bool match = pat.is_literal() ? sc.kind == NodeKind::Lit && sc.value == *pat.literal
                                    : sc.kind == NodeKind::Cons && sc.name == pat.constructor &&
                                          sc.args.size() == pat.vars.size();
      if (!match) continue;
      std::vector<NodeId> env = *cl.env;
      for (std::size_t k = 0; k < pat.vars.size(); ++k) env[static_cast<std::size_t>(pat.vars[k])] = sc.args[k];
      Builder b(st);
      NodeId body = b.build(*br.body, env, cl.names);
      rewrite(st, redex, body, from);
      return;
    }
    fail(x);
  }

  void narrow() {
    const HeapNode& n = s_.node(p_.redex);
    const CaseClosure& cl = n.closure;
    for (const Branch& br : cl.code->branches) {
      Successor& x = start();
      MachineState& st = x.state;
      NodeId value;
      if (br.pattern.is_literal()) {
        HeapNode l;
        l.kind = NodeKind::Lit;
        l.value = *br.pattern.literal;
        value = alloc(st, std::move(l));
      } else {
        Builder b(st);
        std::vector<NodeId> args;
        for (VarId v : br.pattern.vars)
          args.push_back(b.var(cl.names ? std::string_view((*cl.names)[static_cast<std::size_t>(v)]) : ""));
        value = b.cons(br.pattern.constructor, std::move(args));
      }
      bind(st, p_.var, value, x.info);
      select(x, p_.redex);
    }
  }

  void builtin() {
    Successor& x = start();
    MachineState& st = x.state;
    NodeId from = fresh_from(x);
    const HeapNode& n = st.node(p_.redex);
    if (n.kind == NodeKind::Join) {
      // The left conjunct reduced to something other than Success.
      fail(x);
      return;
    }
    switch (n.builtin->op) {
      case BuiltinOp::SeqAnd:
      case BuiltinOp::Cond:
        if (!is_success(st, n.args[0])) return fail(x);
        rewrite(st, p_.redex, n.args[1], from);
        return;
      case BuiltinOp::Failed:
        return fail(x);
      default:
        break;
    }
    const HeapNode& a = st.node(st.deref(n.args[0]));
    const HeapNode& b = st.node(st.deref(n.args[1]));
    if (a.kind != NodeKind::Lit || b.kind != NodeKind::Lit) return fail(x);
    std::int64_t u = a.value, v = b.value;
    HeapNode r;
    auto boolean = [&](bool t) {
      r.kind = NodeKind::Cons;
      r.name = t ? kTrue : kFalse;
    };
    r.kind = NodeKind::Lit;
    switch (n.builtin->op) {
      case BuiltinOp::Add: r.value = static_cast<std::int64_t>(static_cast<std::uint64_t>(u) + static_cast<std::uint64_t>(v)); break;
      case BuiltinOp::Sub: r.value = static_cast<std::int64_t>(static_cast<std::uint64_t>(u) - static_cast<std::uint64_t>(v)); break;
      case BuiltinOp::Mul: r.value = static_cast<std::int64_t>(static_cast<std::uint64_t>(u) * static_cast<std::uint64_t>(v)); break;
      case BuiltinOp::Div:
        if (v == 0) return fail(x);
        r.value = floor_div(u, v);
        break;
      case BuiltinOp::Mod:
        if (v == 0) return fail(x);
        r.value = floor_mod(u, v);
        break;
      case BuiltinOp::Eq: boolean(u == v); break;
      case BuiltinOp::Neq: boolean(u != v); break;
      case BuiltinOp::Lt: boolean(u < v); break;
      case BuiltinOp::Le: boolean(u <= v); break;
      case BuiltinOp::Gt: boolean(u > v); break;
      case BuiltinOp::Ge: boolean(u >= v); break;
      default: throw EvalError("internal error: unexpected builtin");
    }
    mut(st, p_.redex) = std::move(r);
  }

  // Equations a1 =:= b1 &> ... &> an =:= bn, or Success when n = 0.
  static NodeId equations(MachineState& st, const std::vector<NodeId>& as, const std::vector<NodeId>& bs) {
    Builder b(st);
    if (as.empty()) return success_node(st);
    NodeId chain = b.call("=:=", {as.back(), bs.back()});
    for (std::size_t k = as.size() - 1; k-- > 0;) chain = b.call("&>", {b.call("=:=", {as[k], bs[k]}), chain});
    return chain;
  }

  void unify() {
    Successor& x = start();
    MachineState& st = x.state;
    NodeId from = fresh_from(x);
    const HeapNode& n = st.node(p_.redex);
    NodeId a = st.deref(n.args[0]);
    NodeId b = st.deref(n.args[1]);
    if (is_data(st, a) && is_data(st, b)) {
      Unifier u(st);
      if (!u.unify(a, b)) return fail(x);
      for (const auto& [v, t] : u.bindings()) bind(st, v, t, x.info);
      rewrite(st, p_.redex, success_node(st), from);
      return;
    }
    // One side contains unevaluated calls: decompose one level.
    if (st.node(b).kind == NodeKind::Unbound) std::swap(a, b);
    const HeapNode& tb = st.node(b);
    if (st.node(a).kind == NodeKind::Unbound) {
      if (tb.kind != NodeKind::Cons) return fail(x);
      std::vector<NodeId> targs = tb.args;
      std::string_view name = tb.name;
      Builder bl(st);
      std::vector<NodeId> fresh;
      for (std::size_t k = 0; k < targs.size(); ++k) fresh.push_back(bl.var(""));
      NodeId shell = bl.cons(name, fresh);
      bind(st, a, shell, x.info);
      rewrite(st, p_.redex, equations(st, fresh, targs), from);
      return;
    }
    const HeapNode& ta = st.node(a);
    if (ta.kind != NodeKind::Cons || tb.kind != NodeKind::Cons || ta.name != tb.name ||
        ta.args.size() != tb.args.size())
      return fail(x);
    std::vector<NodeId> as = ta.args, bs = tb.args;
    rewrite(st, p_.redex, equations(st, as, bs), from);
  }

  void spawn() {
    Successor& x = start();
    MachineState& st = x.state;
    HeapNode& n = mut(st, p_.redex);
    n.kind = NodeKind::Join;
    n.builtin = nullptr;
    Task t;
    t.id = st.next_task_id++;
    t.goal = n.args[1];
    t.join = p_.redex;
    st.tasks.insert(st.tasks.begin() + static_cast<std::ptrdiff_t>(p_.task_index) + 1, t);
  }

  void saturate() {
    Successor& x = start();
    MachineState& st = x.state;
    const HeapNode& n = st.node(p_.redex);
    const HeapNode& f = st.node(st.deref(n.args[0]));
    if (f.kind != NodeKind::Part) return fail(x);
    HeapNode r = f;
    r.args.push_back(n.args[1]);
    if (f.value == 1) {
      r.kind = r.ctor ? NodeKind::Cons : NodeKind::Fun;
      r.value = 0;
      r.ctor = false;
    } else {
      r.value = f.value - 1;
    }
    mut(st, p_.redex) = std::move(r);
  }

  const MachineState& s_;
  const Internal& p_;
  std::vector<Successor> out_;
};

void check_symbols(const Program& p, const Expr& e, std::size_t var_count) {
  walk(e, [&](const Expr& x) {
    if (const auto* v = x.as<Var>()) {
      if (v->id < 0 || static_cast<std::size_t>(v->id) >= var_count) throw EvalError("goal variable out of range");
    } else if (const auto* c = x.as<Comb>()) {
      if (c->kind == CombKind::Cons) {
        if (!p.find_constructor(c->name)) throw EvalError("unknown constructor `" + c->name + "` in goal");
        return;
      }
      int arity;
      if (const FuncDecl* f = p.find_function(c->name))
        arity = f->arity;
      else if (const Builtin* b = find_builtin(c->name))
        arity = b->arity;
      else if (c->kind == CombKind::Part && p.find_constructor(c->name))
        return;
      else
        throw EvalError("unknown function `" + c->name + "` in goal");
      int expected = c->kind == CombKind::Fun ? arity : arity - c->missing;
      if (static_cast<int>(c->args.size()) != expected)
        throw EvalError("wrong number of arguments for `" + c->name + "` in goal");
    }
  });
}

bool is_operator_name(std::string_view name) {
  return !name.empty() && !std::isalnum(static_cast<unsigned char>(name[0])) && name[0] != '_' && name[0] != '[';
}

void show(const MachineState& s, NodeId id, bool arg, std::string& out, int depth) {
  if (depth > 1000) {
    out += "...";
    return;
  }
  id = s.deref(id);
  const HeapNode& n = s.node(id);
  auto app = [&](std::string_view head, const std::vector<NodeId>& args) {
    if (args.empty()) {
      out += head;
      return;
    }
    if (is_operator_name(head) && args.size() == 2) {
      if (arg) out += '(';
      show(s, args[0], true, out, depth + 1);
      out += ' ';
      out += head;
      out += ' ';
      show(s, args[1], head != kCons, out, depth + 1);
      if (arg) out += ')';
      return;
    }
    if (arg) out += '(';
    if (is_operator_name(head)) {
      out += '(';
      out += head;
      out += ')';
    } else {
      out += head;
    }
    for (NodeId a : args) {
      out += ' ';
      show(s, a, true, out, depth + 1);
    }
    if (arg) out += ')';
  };
  switch (n.kind) {
    case NodeKind::Unbound:
      out += "_" + std::to_string(id);
      return;
    case NodeKind::Lit:
      if (arg && n.value < 0) out += "(" + std::to_string(n.value) + ")";
      else out += std::to_string(n.value);
      return;
    case NodeKind::Cons: {
      if (n.name == kCons) {
        std::vector<NodeId> elems;
        NodeId cur = id;
        while (is_cons(s.node(cur), kCons)) {
          elems.push_back(s.node(cur).args[0]);
          cur = s.deref(s.node(cur).args[1]);
        }
        if (is_cons(s.node(cur), kNil)) {
          out += '[';
          for (std::size_t k = 0; k < elems.size(); ++k) {
            if (k) out += ',';
            show(s, elems[k], false, out, depth + 1);
          }
          out += ']';
          return;
        }
      }
      app(n.name, n.args);
      return;
    }
    case NodeKind::Fun:
    case NodeKind::Part:
      app(n.name, n.args);
      return;
    case NodeKind::Case:
      if (arg) out += '(';
      out += n.closure.code->kind == CaseKind::Flex ? "fcase " : "case ";
      show(s, n.args[0], false, out, depth + 1);
      out += " of {...}";
      if (arg) out += ')';
      return;
    case NodeKind::Or:
      app("or", n.args);
      return;
    case NodeKind::Apply:
      app("apply", n.args);
      return;
    case NodeKind::Join:
      app("&", n.args);
      return;
    default:
      return;
  }
}

}  // namespace

bool is_data(const MachineState& s, NodeId id) {
  id = s.deref(id);
  const HeapNode& n = s.node(id);
  if (n.kind == NodeKind::Unbound || n.kind == NodeKind::Lit) return true;
  if (n.kind != NodeKind::Cons) return false;
  return std::all_of(n.args.begin(), n.args.end(), [&](NodeId a) { return is_data(s, a); });
}

std::string show_term(const MachineState& s, NodeId id) {
  std::string out;
  show(s, id, false, out, 0);
  return out;
}

MachineState inject(std::shared_ptr<const Program> program, std::shared_ptr<const GoalCode> goal) {
  check_symbols(*program, *goal->expr, goal->var_names.size());
  MachineState s;
  s.program = std::move(program);
  s.goal = std::move(goal);
  Builder b(s);
  std::vector<NodeId> env(s.goal->var_names.size(), kNoNode);
  const Expr* body = s.goal->expr.get();
  if (const auto* f = body->as<Free>()) {
    for (VarId v : f->vars) {
      const std::string& name = s.goal->var_names.at(static_cast<std::size_t>(v));
      NodeId id = b.var(name);
      env[static_cast<std::size_t>(v)] = id;
      s.answer_vars.emplace_back(name, id);
    }
    body = f->body.get();
  }
  s.root = b.build(*body, env, &s.goal->var_names);
  Task t;
  t.id = 0;
  t.goal = s.root;
  t.root = true;
  s.tasks.push_back(t);
  settle(s, nullptr);
  return s;
}

MachineState inject(std::shared_ptr<const Program> program, const Goal& goal) {
  return inject(std::move(program), std::make_shared<const GoalCode>(GoalCode{goal.expr, goal.var_names}));
}

MachineState inject(std::shared_ptr<const Program> program, std::string_view goal_text) {
  Goal g = parse_goal(goal_text, *program);
  return inject(std::move(program), g);
}

Outcome is_terminal(const MachineState& s) {
  if (s.failed) return Outcome::Failure;
  if (s.tasks.empty()) return Outcome::Success;
  bool any_active = std::any_of(s.tasks.begin(), s.tasks.end(),
                                [](const Task& t) { return t.status == TaskStatus::Active; });
  return any_active ? Outcome::Running : Outcome::Floundered;
}

std::optional<Plan> plan(const MachineState& s) {
  auto p = plan_internal(s);
  if (!p) return std::nullopt;
  Plan out;
  out.task_index = p->task_index;
  out.redex = p->redex;
  out.kind = kind_of(p->action);
  out.function = function_of(s, *p);
  out.alternatives = 1;
  if (p->action == Action::OrSplit) out.alternatives = 2;
  if (p->action == Action::Narrow) out.alternatives = s.node(p->redex).closure.code->branches.size();
  switch (p->action) {
    case Action::Narrow:
    case Action::BindSuccess: out.to_bind = {p->var}; break;
    case Action::Unify: out.to_bind = unify_targets(s, p->redex); break;
    default: break;
  }
  return out;
}

std::vector<Successor> step(const MachineState& s) {
  auto p = plan_internal(s);
  if (!p) throw EvalError("cannot step a terminal state");
  return Stepper(s, *p).run();
}

}  // namespace flw

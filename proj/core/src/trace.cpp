#include "flw/trace.hpp"

#include <climits>
#include <functional>
#include <map>

#include "flw/solve.hpp"
#include "json.hpp"

namespace flw {

using Json = nlohmann::ordered_json;

namespace {

// Rendered trees beyond this many nodes are elided off the marked paths.
constexpr std::size_t kRenderBudget = 20000;

std::vector<NodeId> successors(const MachineState& s, NodeId id) {
  const HeapNode& n = s.node(id);
  std::vector<NodeId> out;
  switch (n.kind) {
    case NodeKind::Case: out.push_back(s.deref(n.args[0])); break;
    case NodeKind::Cons:
    case NodeKind::Fun:
    case NodeKind::Part:
    case NodeKind::Or:
    case NodeKind::Apply:
    case NodeKind::Join:
      for (NodeId a : n.args) out.push_back(s.deref(a));
      break;
    default: break;
  }
  return out;
}

class Renderer {
 public:
  Renderer(const MachineState& s, int max_depth, const std::vector<NodeId>& marked)
      : s_(s), max_depth_(max_depth) {
    NodeId root = s.deref(s.root);
    count_references(root);
    for (NodeId m : marked) marked_[m] = true;
    leads_to_mark(root);
  }

  RenderedNode render(NodeId id, int depth) {
    const HeapNode& n = s_.node(id);
    RenderedNode r;
    r.id = id;
    r.shared = refs_[id] > 1;
    bool keep = marks_[id];
    if (!keep && (depth > max_depth_ || rendered_ >= kRenderBudget)) {
      r.kind = "elided";
      r.label = "...";
      return r;
    }
    ++rendered_;
    switch (n.kind) {
      case NodeKind::Unbound:
        r.kind = "var";
        r.label = n.name.empty() ? "_" + std::to_string(id) : std::string(n.name);
        break;
      case NodeKind::Lit:
        r.kind = "lit";
        r.label = std::to_string(n.value);
        break;
      case NodeKind::Cons:
        r.kind = "cons";
        r.label = std::string(n.name);
        break;
      case NodeKind::Fun:
        r.kind = "fun";
        r.label = std::string(n.name);
        break;
      case NodeKind::Part:
        r.kind = "part";
        r.label = std::string(n.name);
        break;
      case NodeKind::Case:
        r.kind = n.closure.code->kind == CaseKind::Flex ? "fcase" : "case";
        r.label = format_expr(Expr{*n.closure.code}, *n.closure.names);
        break;
      case NodeKind::Or:
        r.kind = "or";
        r.label = "or";
        break;
      case NodeKind::Apply:
        r.kind = "apply";
        r.label = "apply";
        break;
      case NodeKind::Join:
        r.kind = "and";
        r.label = "&";
        break;
      default: break;
    }
    for (NodeId c : successors(s_, id)) r.children.push_back(render(c, depth + 1));
    return r;
  }

 private:
  void count_references(NodeId root) {
    std::vector<NodeId> stack{root};
    refs_[root] = 1;
    while (!stack.empty()) {
      NodeId id = stack.back();
      stack.pop_back();
      for (NodeId c : successors(s_, id))
        if (refs_[c]++ == 0) stack.push_back(c);
    }
  }

  bool leads_to_mark(NodeId id) {
    auto it = marks_.find(id);
    if (it != marks_.end()) return it->second;
    bool m = marked_.count(id) > 0;
    for (NodeId c : successors(s_, id)) m = leads_to_mark(c) || m;
    marks_[id] = m;
    return m;
  }

  const MachineState& s_;
  int max_depth_;
  std::map<NodeId, int> refs_;
  std::map<NodeId, bool> marked_;
  std::map<NodeId, bool> marks_;
  std::size_t rendered_ = 0;
};

Json tree_json(const RenderedNode& n) {
  Json j;
  j["id"] = n.id;
  j["kind"] = n.kind;
  j["label"] = n.label;
  j["shared"] = n.shared;
  Json children = Json::array();
  for (const auto& c : n.children) children.push_back(tree_json(c));
  j["children"] = std::move(children);
  return j;
}

Json step_json(const RenderedStep& r) {
  Json j;
  j["node"] = r.node;
  j["tree"] = tree_json(r.tree);
  j["redex"] = r.redex ? Json(*r.redex) : Json(nullptr);
  j["kind"] = r.kind.empty() ? Json(nullptr) : Json(r.kind);
  j["function"] = r.function.empty() ? Json(nullptr) : Json(r.function);
  j["to_bind"] = r.to_bind;
  Json tasks = Json::array();
  for (const auto& t : r.tasks) {
    Json x;
    x["id"] = t.id;
    x["status"] = t.active ? "active" : "suspended";
    x["goal"] = t.goal;
    x["waiting_on"] = t.waiting_on == kNoNode ? Json(nullptr) : Json(t.waiting_on);
    tasks.push_back(std::move(x));
  }
  j["tasks"] = std::move(tasks);
  j["terminal"] = r.terminal;
  j["steps"] = r.steps;
  j["alternatives"] = r.alternatives;
  j["answer"] = r.answer ? Json(*r.answer) : Json(nullptr);
  j["note"] = r.note;
  return j;
}

Json info_json(const std::optional<StepInfo>& info) {
  if (!info) return nullptr;
  Json j;
  j["redex"] = info->redex;
  j["kind"] = std::string(to_string(info->kind));
  Json bound = Json::array();
  for (const auto& [v, t] : info->bound) bound.push_back({v, t});
  j["bound"] = std::move(bound);
  j["task"] = info->task;
  j["woken"] = info->woken;
  j["failed"] = info->failed;
  j["function"] = info->function;
  return j;
}

std::optional<StepInfo> parse_info(const Json& j) {
  if (j.is_null()) return std::nullopt;
  StepInfo info;
  info.redex = j.at("redex").get<NodeId>();
  auto kind = parse_step_kind(j.at("kind").get<std::string>());
  if (!kind) throw TraceError(TraceError::Code::Malformed, "unknown step kind");
  info.kind = *kind;
  for (const auto& b : j.at("bound")) info.bound.emplace_back(b.at(0).get<NodeId>(), b.at(1).get<NodeId>());
  if (j.contains("task")) info.task = j["task"].get<int>();
  if (j.contains("woken")) info.woken = j["woken"].get<std::vector<int>>();
  if (j.contains("failed")) info.failed = j["failed"].get<bool>();
  if (j.contains("function")) info.function = j["function"].get<std::string>();
  return info;
}

Json node_json(int id, const std::string& state, const std::optional<StepInfo>& info, const std::vector<int>& children,
               const std::string& terminal) {
  Json j;
  j["id"] = id;
  j["state"] = Json::parse(state);
  j["stepinfo"] = info_json(info);
  j["children"] = children;
  j["terminal"] = terminal;
  return j;
}

}  // namespace

std::string to_json(const RenderedStep& r) { return step_json(r).dump(); }

RenderedStep render_state(const MachineState& s, int trace_node, int max_depth) {
  RenderedStep r;
  r.node = trace_node;
  Outcome o = is_terminal(s);
  r.terminal = std::string(to_string(o));
  r.steps = s.steps;
  std::vector<NodeId> marked;
  if (auto p = plan(s)) {
    r.redex = s.deref(p->redex);
    r.kind = std::string(to_string(p->kind));
    r.function = p->function;
    r.to_bind = p->to_bind;
    r.alternatives = p->alternatives;
    marked = p->to_bind;
    marked.push_back(*r.redex);
  }
  for (const Task& t : s.tasks)
    r.tasks.push_back({t.id, t.status == TaskStatus::Active, s.deref(t.goal), t.waiting_on});
  if (o == Outcome::Success) r.answer = answer_of(s).text();
  Renderer renderer(s, max_depth, marked);
  r.tree = renderer.render(s.deref(s.root), 0);
  return r;
}

std::optional<RunPolicy> parse_run_policy(std::string_view text) {
  if (text == "breakpoint") return RunPolicy::breakpoint();
  if (text == "terminal") return RunPolicy::terminal();
  constexpr std::string_view prefix = "steps:";
  if (text.substr(0, prefix.size()) == prefix) {
    std::string digits(text.substr(prefix.size()));
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) return std::nullopt;
    return RunPolicy::count(std::stoull(digits));
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

TraceSession::TraceSession(MachineState initial) {
  TraceNode root;
  root.state = std::move(initial);
  nodes_.push_back(std::move(root));
  step_calls_.push_back(0);
  history_.push_back(0);
}

TraceSession::TraceSession(std::shared_ptr<const Program> program, std::string_view goal)
    : TraceSession(inject(std::move(program), goal)) {}

const std::vector<int>& TraceSession::children(int id) {
  TraceNode& n = nodes_.at(static_cast<std::size_t>(id));
  if (n.children) return *n.children;
  if (is_terminal(n.state) != Outcome::Running) {
    n.children.emplace();
    return *n.children;
  }
  ++step_calls_[static_cast<std::size_t>(id)];
  auto next = step(n.state);
  std::vector<int> ids;
  for (auto& x : next) {
    TraceNode c;
    c.id = static_cast<int>(nodes_.size());
    c.state = std::move(x.state);
    c.info = std::move(x.info);
    c.parent = id;
    ids.push_back(c.id);
    nodes_.push_back(std::move(c));
    step_calls_.push_back(0);
  }
  // nodes_ may have reallocated.
  nodes_[static_cast<std::size_t>(id)].children = std::move(ids);
  return *nodes_[static_cast<std::size_t>(id)].children;
}

RenderedStep TraceSession::render() const { return render(cursor_); }

RenderedStep TraceSession::render(int id) const {
  const TraceNode& n = node(id);
  RenderedStep r = render_state(n.state, id);
  r.note = n.note;
  return r;
}

void TraceSession::move_to(int id) {
  cursor_ = id;
  history_.push_back(id);
}

RenderedStep TraceSession::forward(std::size_t alternative) {
  if (is_terminal(node(cursor_).state) != Outcome::Running)
    throw TraceError(TraceError::Code::Terminal, "cannot step forward from a terminal node");
  const auto& ch = children(cursor_);
  if (alternative >= ch.size())
    throw TraceError(TraceError::Code::OutOfRange, "alternative " + std::to_string(alternative) + " out of range (" +
                                                       std::to_string(ch.size()) + " available)");
  move_to(ch[alternative]);
  return render();
}

RenderedStep TraceSession::backward() {
  int parent = node(cursor_).parent;
  if (parent < 0) throw TraceError(TraceError::Code::AtRoot, "already at the root of the trace");
  move_to(parent);
  return render();
}

bool TraceSession::at_breakpoint(int id) const {
  auto p = plan(node(id).state);
  return p && !p->function.empty() && breakpoints_.count(p->function) > 0;
}

RenderedStep TraceSession::run_to(RunPolicy policy, std::uint64_t max_steps) {
  std::uint64_t taken = 0;
  for (;;) {
    if (policy.kind == RunPolicy::Kind::Steps && taken >= policy.steps) break;
    if (is_terminal(node(cursor_).state) != Outcome::Running) break;
    if (taken >= max_steps) break;
    const auto& ch = children(cursor_);
    if (ch.size() > 1)
      nodes_[static_cast<std::size_t>(cursor_)].note =
          "run_to took alternative 0 of " + std::to_string(ch.size());
    move_to(ch[0]);
    ++taken;
    if (policy.kind == RunPolicy::Kind::Breakpoint && at_breakpoint(cursor_)) break;
  }
  return render();
}

std::string TraceSession::export_json() const {
  Json nodes = Json::array();
  for (const auto& n : nodes_) {
    RenderedStep r = render_state(n.state, n.id, INT_MAX);
    r.note = n.note;
    nodes.push_back(node_json(n.id, to_json(r), n.info, n.children.value_or(std::vector<int>{}), r.terminal));
  }
  Json j;
  j["nodes"] = std::move(nodes);
  j["root"] = 0;
  j["cursor"] = cursor_;
  return j.dump();
}

ExportedTrace import_trace(std::string_view text) {
  try {
    Json j = Json::parse(text);
    ExportedTrace t;
    for (const auto& n : j.at("nodes")) {
      ExportedNode e;
      e.id = n.at("id").get<int>();
      e.state = n.at("state").dump();
      e.info = parse_info(n.at("stepinfo"));
      e.children = n.at("children").get<std::vector<int>>();
      e.terminal = n.at("terminal").get<std::string>();
      t.nodes.push_back(std::move(e));
    }
    t.root = j.at("root").get<int>();
    t.cursor = j.at("cursor").get<int>();
    return t;
  } catch (const Json::exception& e) {
    throw TraceError(TraceError::Code::Malformed, std::string("malformed trace: ") + e.what());
  }
}

std::string export_text(const ExportedTrace& t) {
  Json nodes = Json::array();
  for (const auto& n : t.nodes) nodes.push_back(node_json(n.id, n.state, n.info, n.children, n.terminal));
  Json j;
  j["nodes"] = std::move(nodes);
  j["root"] = t.root;
  j["cursor"] = t.cursor;
  return j.dump();
}

}  // namespace flw

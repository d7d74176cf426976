#include "flw/analysis.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "flw/builtins.hpp"
#include "flw/ir_json.hpp"
#include "json.hpp"

namespace flw {

namespace {

bool is_known(const Program& p, const std::string& f) {
  return p.find_function(f) != nullptr || find_builtin(f) != nullptr;
}

void require_known(const Program& p, const std::string& f) {
  if (!is_known(p, f)) throw UnknownFunction(f);
}

// Builtins that can fail on ground arguments.
bool partial_builtin(const Builtin& b) {
  switch (b.op) {
    case BuiltinOp::Unify:
    case BuiltinOp::Failed:
    case BuiltinOp::Div:
    case BuiltinOp::Mod:
      return true;
    default:
      return false;
  }
}

// Local part of the completeness criterion: every case covers all
// constructors of its type, no literal cases, no higher-order application.
bool locally_complete(const Program& p, const Expr& e) {
  bool ok = true;
  walk(e, [&](const Expr& n) {
    if (!ok) return;
    if (n.is<Apply>()) {
      ok = false;
    } else if (const auto* c = n.as<Case>()) {
      if (c->branches.empty() || c->branches.front().pattern.is_literal()) {
        ok = false;
        return;
      }
      auto ref = p.find_constructor(c->branches.front().pattern.constructor);
      if (!ref) {
        ok = false;
        return;
      }
      std::set<std::string> covered;
      for (const auto& b : c->branches) covered.insert(b.pattern.constructor);
      for (const auto& k : ref->type->constructors)
        if (!covered.count(k.name)) ok = false;
    }
  });
  return ok;
}

bool function_locally_complete(const Program& p, const std::string& f) {
  if (const Builtin* b = find_builtin(f); b && !p.find_function(f)) return !partial_builtin(*b);
  const FuncDecl* d = p.find_function(f);
  const Rule* r = d->as_rule();
  return r == nullptr || locally_complete(p, *r->body);
}

std::vector<std::string> sorted(std::set<std::string> s) { return {s.begin(), s.end()}; }

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string join_names(const std::vector<std::string>& names) {
  std::string s;
  for (std::size_t i = 0; i < names.size(); ++i) s += (i ? ", " : "") + names[i];
  return s;
}

std::vector<std::string> direct_callees(const Program& p, const std::string& f) {
  require_known(p, f);
  const FuncDecl* d = p.find_function(f);
  if (!d || !d->as_rule()) return {};
  std::set<std::string> out;
  walk(*d->as_rule()->body, [&](const Expr& e) {
    const auto* c = e.as<Comb>();
    if (!c || c->kind == CombKind::Cons) return;
    if (p.find_function(c->name) || find_builtin(c->name)) out.insert(c->name);
  });
  return sorted(std::move(out));
}

std::vector<std::string> indirect_callees(const Program& p, const std::string& f) {
  std::set<std::string> seen;
  std::deque<std::string> queue;
  for (auto& g : direct_callees(p, f)) queue.push_back(g);
  while (!queue.empty()) {
    std::string g = std::move(queue.front());
    queue.pop_front();
    if (!seen.insert(g).second) continue;
    for (auto& h : direct_callees(p, g))
      if (!seen.count(h)) queue.push_back(h);
  }
  return sorted(std::move(seen));
}

AnalysisResult get_type(const Program& p, const std::string& f) {
  require_known(p, f);
  if (const FuncDecl* d = p.find_function(f))
    return AnalysisResult::message(d->signature ? to_string(*d->signature) : "untyped");
  return AnalysisResult::message(to_string(find_builtin(f)->type));
}

AnalysisResult overlapping(const Program& p, const std::string& f) {
  require_known(p, f);
  const FuncDecl* d = p.find_function(f);
  bool found = false;
  if (d && d->as_rule())
    walk(*d->as_rule()->body, [&](const Expr& e) { found = found || e.is<Or>(); });
  return AnalysisResult::message(found ? "overlapping" : "not overlapping");
}

AnalysisResult completeness(const Program& p, const std::string& f) {
  require_known(p, f);
  bool ok = function_locally_complete(p, f);
  for (const auto& g : indirect_callees(p, f)) ok = ok && function_locally_complete(p, g);
  return AnalysisResult::message(ok ? "complete" : "might be incomplete");
}

AnalysisResult direct_deps(const Program& p, const std::string& f) {
  return AnalysisResult::message(join_names(direct_callees(p, f)));
}

AnalysisResult indirect_deps(const Program& p, const std::string& f) {
  return AnalysisResult::message(join_names(indirect_callees(p, f)));
}

AnalysisResult dependencies(const Program& p, const std::string& f) {
  return AnalysisResult::message("direct: " + join_names(direct_callees(p, f)) +
                                 "; indirect: " + join_names(indirect_callees(p, f)));
}

AnalysisResult called_by(const Program& p, const std::string& f) {
  require_known(p, f);
  std::set<std::string> callers;
  for (const auto& g : p.functions) {
    auto callees = direct_callees(p, g.name);
    if (std::binary_search(callees.begin(), callees.end(), f)) callers.insert(g.name);
  }
  return AnalysisResult::message(join_names(sorted(std::move(callers))));
}

AnalysisResult dead_code(const Program& p, const std::string& f) {
  require_known(p, f);
  auto reach = indirect_callees(p, f);
  std::set<std::string> live(reach.begin(), reach.end());
  live.insert(f);
  std::set<std::string> dead;
  for (const auto& g : p.functions)
    if (!live.count(g.name)) dead.insert(g.name);
  return AnalysisResult::message(join_names(sorted(std::move(dead))));
}

AnalysisResult dep_graph(const Program& p, const std::string& f) {
  require_known(p, f);
  DepGraph g;
  g.root = f;
  auto reach = indirect_callees(p, f);
  std::set<std::string> nodes(reach.begin(), reach.end());
  nodes.erase(f);
  g.nodes.push_back(f);
  g.nodes.insert(g.nodes.end(), nodes.begin(), nodes.end());
  std::set<std::pair<std::string, std::string>> edges;
  for (const auto& n : g.nodes)
    for (const auto& c : direct_callees(p, n)) edges.emplace(n, c);
  g.edges.assign(edges.begin(), edges.end());
  return AnalysisResult::graph(std::move(g));
}

std::string export_graph(const DepGraph& g, GraphFormat format) {
  if (format == GraphFormat::Json) {
    nlohmann::ordered_json j;
    j["root"] = g.root;
    j["nodes"] = g.nodes;
    auto edges = nlohmann::ordered_json::array();
    for (const auto& [a, b] : g.edges) edges.push_back({a, b});
    j["edges"] = std::move(edges);
    return j.dump();
  }
  std::string s = "digraph " + dot_quote(g.root) + " {\n";
  for (const auto& n : g.nodes) {
    s += "  " + dot_quote(n);
    if (n == g.root) s += " [shape=box, style=filled, fillcolor=\"#f4cccc\"]";
    s += ";\n";
  }
  for (const auto& [a, b] : g.edges) s += "  " + dot_quote(a) + " -> " + dot_quote(b) + ";\n";
  return s + "}\n";
}

// ---------------------------------------------------------------------------
// Registry and cache

void AnalysisRegistry::add(std::string name, Analysis analysis) {
  if (find(name)) throw DuplicateAnalysis(name);
  entries_.emplace_back(std::move(name), std::move(analysis));
}

const Analysis* AnalysisRegistry::find(const std::string& name) const {
  for (const auto& [n, a] : entries_)
    if (n == name) return &a;
  return nullptr;
}

std::vector<std::string> AnalysisRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& e : entries_) out.push_back(e.first);
  return out;
}

AnalysisRegistry default_registry() {
  AnalysisRegistry r;
  r.add("Get Type", get_type);
  r.add("Overlapping Rules", overlapping);
  r.add("Completeness", completeness);
  r.add("(D/I)Dependency", dependencies);
  r.add("Called By", called_by);
  r.add("Dead Code", dead_code);
  r.add("DGraph", dep_graph);
  return r;
}

AnalysisResult AnalysisCache::get(std::uint64_t version, const std::string& analysis,
                                  const std::string& function,
                                  const std::function<AnalysisResult()>& compute) {
  std::shared_ptr<Slot> slot;
  {
    std::lock_guard lock(mu_);
    auto& s = slots_[Key{version, analysis, function}];
    if (!s) s = std::make_shared<Slot>();
    slot = s;
  }
  std::call_once(slot->once, [&] {
    {
      std::lock_guard lock(mu_);
      ++computations_;
    }
    slot->result = compute();
  });
  return *slot->result;
}

void AnalysisCache::retain_version(std::uint64_t version) {
  std::lock_guard lock(mu_);
  std::erase_if(slots_, [&](const auto& kv) { return std::get<0>(kv.first) != version; });
}

std::size_t AnalysisCache::computations() const {
  std::lock_guard lock(mu_);
  return computations_;
}

std::size_t AnalysisCache::size() const {
  std::lock_guard lock(mu_);
  return slots_.size();
}

AnalysisResult analyze(AnalysisCache& cache, const AnalysisRegistry& registry, const Program& program,
                       std::uint64_t version, const std::string& analysis, const std::string& function) {
  const Analysis* a = registry.find(analysis);
  if (!a) throw UnknownAnalysis(analysis);
  require_known(program, function);
  return cache.get(version, analysis, function, [&] { return (*a)(program, function); });
}

AnalysisResult analyze(AnalysisCache& cache, const AnalysisRegistry& registry, const Program& program,
                       const std::string& analysis, const std::string& function) {
  return analyze(cache, registry, program, content_hash(program), analysis, function);
}

std::vector<std::pair<std::string, AnalysisResult>> analyze_all(AnalysisCache& cache,
                                                               const AnalysisRegistry& registry,
                                                               const Program& program,
                                                               const std::string& analysis) {
  std::uint64_t version = content_hash(program);
  std::vector<std::pair<std::string, AnalysisResult>> out;
  for (const auto& f : program.functions)
    out.emplace_back(f.name, analyze(cache, registry, program, version, analysis, f.name));
  return out;
}

}  // namespace flw

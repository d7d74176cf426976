#include "support/sld.hpp"

#include <functional>
#include <map>

#include "support/terms.hpp"

namespace flw::testing {

namespace {

using Subst = std::map<std::int64_t, TermPtr>;

TermPtr walk_var(TermPtr t, const Subst& s) {
  while (t->kind == Term::Kind::Var) {
    auto it = s.find(t->value);
    if (it == s.end()) return t;
    t = it->second;
  }
  return t;
}

TermPtr resolve(const TermPtr& t, const Subst& s) {
  TermPtr w = walk_var(t, s);
  if (w->kind != Term::Kind::Con || w->args.empty()) return w;
  std::vector<TermPtr> args;
  for (const auto& a : w->args) args.push_back(resolve(a, s));
  return Term::con(w->name, std::move(args));
}

bool occurs(std::int64_t v, const TermPtr& t, const Subst& s) {
  TermPtr w = walk_var(t, s);
  if (w->kind == Term::Kind::Var) return w->value == v;
  for (const auto& a : w->args)
    if (occurs(v, a, s)) return true;
  return false;
}

bool unify(const TermPtr& a, const TermPtr& b, Subst& s) {
  TermPtr x = walk_var(a, s);
  TermPtr y = walk_var(b, s);
  if (x->kind == Term::Kind::Var && y->kind == Term::Kind::Var && x->value == y->value) return true;
  if (x->kind == Term::Kind::Var) {
    if (occurs(x->value, y, s)) return false;
    s[x->value] = y;
    return true;
  }
  if (y->kind == Term::Kind::Var) return unify(y, x, s);
  if (x->kind != y->kind) return false;
  if (x->kind == Term::Kind::Int) return x->value == y->value;
  if (x->name != y->name || x->args.size() != y->args.size()) return false;
  for (std::size_t i = 0; i < x->args.size(); ++i)
    if (!unify(x->args[i], y->args[i], s)) return false;
  return true;
}

/// Converts a parsed term, numbering its variables through `vars`.
TermPtr convert(const PTerm& t, std::map<std::string, std::int64_t>& vars, std::int64_t& next) {
  switch (t.kind) {
    case PTerm::Kind::Var: {
      if (t.name == "_") return Term::var(next++);
      auto it = vars.find(t.name);
      if (it == vars.end()) it = vars.emplace(t.name, next++).first;
      return Term::var(it->second);
    }
    case PTerm::Kind::Int:
      return Term::integer(t.value);
    case PTerm::Kind::Atom:
      return Term::con(t.name);
    case PTerm::Kind::Compound: {
      std::vector<TermPtr> args;
      for (const auto& a : t.args) args.push_back(convert(a, vars, next));
      return Term::con(t.name == "." ? ":" : t.name, std::move(args));
    }
  }
  return nullptr;
}


class Solver {
 public:
  Solver(const std::vector<PrologClause>& program, int max_depth) : program_(program), max_depth_(max_depth) {}

  std::int64_t next = 0;
  bool truncated = false;

  void solve(std::vector<TermPtr> goals, Subst s, int depth, const std::function<void(const Subst&)>& emit) {
    if (goals.empty()) {
      emit(s);
      return;
    }
    if (depth >= max_depth_) {
      truncated = true;
      return;
    }
    TermPtr g = walk_var(goals.front(), s);
    std::vector<TermPtr> rest(goals.begin() + 1, goals.end());
    if (g->kind == Term::Kind::Con) {
      if (g->name == "true" && g->args.empty()) return solve(rest, s, depth, emit);
      if (g->name == "fail" && g->args.empty()) return;
      if (g->name == "=" && g->args.size() == 2) {
        if (unify(g->args[0], g->args[1], s)) solve(rest, s, depth, emit);
        return;
      }
    }
    for (const auto& c : program_) {
      std::map<std::string, std::int64_t> vars;
      TermPtr head = convert(c.head, vars, next);
      Subst s2 = s;
      if (!unify(head, g, s2)) continue;
      std::vector<TermPtr> body;
      for (const auto& b : c.body) body.push_back(convert(b, vars, next));
      body.insert(body.end(), rest.begin(), rest.end());
      solve(std::move(body), std::move(s2), depth + 1, emit);
    }
  }

 private:
  const std::vector<PrologClause>& program_;
  int max_depth_;
};

}  // namespace

SldAnswers sld_solve(const std::vector<PrologClause>& program, const std::vector<PTerm>& goals,
                     const std::vector<std::string>& vars, int max_depth) {
  Solver solver(program, max_depth);
  std::map<std::string, std::int64_t> names;
  std::vector<TermPtr> gs;
  for (const auto& g : goals) gs.push_back(convert(g, names, solver.next));
  std::vector<TermPtr> wanted;
  for (const auto& v : vars) {
    auto it = names.find(v);
    wanted.push_back(it == names.end() ? Term::var(solver.next++) : Term::var(it->second));
  }
  SldAnswers out;
  solver.solve(gs, {}, 0, [&](const Subst& s) {
    // Print all bindings together so shared variables get one name.
    std::string joined;
    std::vector<std::string> parts;
    for (const auto& w : wanted) parts.push_back(show(*resolve(w, s)));
    for (const auto& p : parts) joined += p + "\x1f";
    joined = normalize_vars(joined);
    std::vector<std::string> answer;
    std::size_t start = 0;
    for (std::size_t i = 0; i < joined.size(); ++i)
      if (joined[i] == '\x1f') {
        answer.push_back(joined.substr(start, i - start));
        start = i + 1;
      }
    out.answers.push_back(std::move(answer));
  });
  out.truncated = solver.truncated;
  return out;
}

std::vector<PTerm> parse_prolog_goal(const std::string& text) {
  auto clauses = parse_prolog("query__ :- " + text + ".");
  return clauses.at(0).body;
}

}  // namespace flw::testing

#include "flw/validate.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "flw/builtins.hpp"

namespace flw {

namespace {

std::string summarize(const std::vector<Violation>& v) {
  std::string s = "program is not well-formed";
  for (const auto& x : v) s += "\n  " + to_string(x);
  return s;
}

class Validator {
 public:
  explicit Validator(const Program& p) : p_(p) {}

  std::vector<Violation> run() {
    check_types();
    check_operators();
    check_functions();
    return std::move(out_);
  }

 private:
  void report(const std::string& decl, const std::string& rule, std::string msg) {
    out_.push_back({decl, rule, std::move(msg)});
  }

  // -- type declarations ----------------------------------------------------

  void check_type_expr(const std::string& decl, const TypeExpr& t,
                       const std::set<std::string>* allowed_vars) {
    switch (t.kind) {
      case TypeExpr::Kind::Var:
        if (allowed_vars && !allowed_vars->count(t.name))
          report(decl, "type-var-unbound", "type variable `" + t.name + "` is not a parameter");
        break;
      case TypeExpr::Kind::Func:
        check_type_expr(decl, t.domain(), allowed_vars);
        check_type_expr(decl, t.range(), allowed_vars);
        break;
      case TypeExpr::Kind::Cons: {
        std::size_t expected = 0;
        bool known = false;
        if (t.name == kIntType) {
          known = true;
        } else if (const TypeDecl* td = p_.find_type(t.name)) {
          known = true;
          expected = td->type_params.size();
        } else if (t.name == kSuccessType || t.name == "Bool") {
          known = true;  // referenced by builtin signatures
        }
        if (!known) {
          report(decl, "unknown-type", "unknown type `" + t.name + "`");
        } else if (t.args.size() != expected) {
          report(decl, "type-arity",
                 "type `" + t.name + "` expects " + std::to_string(expected) + " argument(s), got " +
                     std::to_string(t.args.size()));
        }
        for (const auto& a : t.args) check_type_expr(decl, a, allowed_vars);
        break;
      }
    }
  }

  void check_types() {
    std::set<std::string> type_names, cons_names;
    for (const auto& t : p_.types) {
      if (t.name.empty()) report(t.name, "empty-name", "type declaration without a name");
      if (!type_names.insert(t.name).second)
        report(t.name, "duplicate-type", "type `" + t.name + "` declared more than once");
      std::set<std::string> params(t.type_params.begin(), t.type_params.end());
      for (const auto& c : t.constructors) {
        if (!cons_names.insert(c.name).second)
          report(t.name, "duplicate-constructor-decl",
                 "constructor `" + c.name + "` declared more than once");
        if (c.arity != static_cast<int>(c.args.size()))
          report(t.name, "cons-decl-arity",
                 "constructor `" + c.name + "` has arity " + std::to_string(c.arity) + " but " +
                     std::to_string(c.args.size()) + " argument type(s)");
        for (const auto& a : c.args) check_type_expr(t.name, a, &params);
      }
    }
  }

  void check_operators() {
    for (const auto& op : p_.operators)
      if (op.precedence < 0 || op.precedence > 9)
        report(op.name, "operator-precedence",
               "precedence " + std::to_string(op.precedence) + " outside 0..9");
  }

  // -- functions ------------------------------------------------------------

  void check_functions() {
    std::set<std::string> names;
    for (const auto& f : p_.functions) {
      if (f.name.empty()) report(f.name, "empty-name", "function declaration without a name");
      if (!names.insert(f.name).second)
        report(f.name, "duplicate-function", "function `" + f.name + "` declared more than once");
      if (f.arity < 0) report(f.name, "rule-arity", "negative arity");
      if (f.signature) {
        check_type_expr(f.name, *f.signature, nullptr);
        if (static_cast<std::size_t>(std::max(f.arity, 0)) > arrow_count(*f.signature))
          report(f.name, "signature-arity",
                 "arity " + std::to_string(f.arity) + " exceeds the domains of `" +
                     to_string(*f.signature) + "`");
      }
      if (const Rule* r = f.as_rule()) check_rule(f, *r);
    }
  }

  void check_rule(const FuncDecl& f, const Rule& r) {
    decl_ = &f.name;
    bound_.clear();
    scope_.clear();
    if (static_cast<int>(r.params.size()) != f.arity)
      report(f.name, "rule-arity",
             "rule has " + std::to_string(r.params.size()) + " parameter(s), arity is " +
                 std::to_string(f.arity));
    std::set<VarId> seen;
    for (VarId v : r.params) {
      if (!seen.insert(v).second)
        report(f.name, "duplicate-param", "parameter `" + r.var_name(v) + "` repeated");
      bind(v, r, false);
    }
    if (!r.body) {
      report(f.name, "missing-body", "rule without body");
      return;
    }
    check_names(f, r);
    expr(*r.body, r);
  }

  // Every variable needs a distinct display name; the text form refers to
  // variables by name.
  void check_names(const FuncDecl& f, const Rule& r) {
    VarId max_id = -1;
    for (VarId v : r.params) max_id = std::max(max_id, v);
    walk(*r.body, [&](const Expr& e) {
      if (const auto* v = e.as<Var>()) max_id = std::max(max_id, v->id);
      if (const auto* c = e.as<Case>())
        for (const auto& b : c->branches)
          for (VarId v : b.pattern.vars) max_id = std::max(max_id, v);
      if (const auto* fr = e.as<Free>())
        for (VarId v : fr->vars) max_id = std::max(max_id, v);
    });
    if (max_id >= static_cast<VarId>(r.var_names.size())) {
      report(f.name, "var-names", "variable " + std::to_string(max_id) + " has no display name");
      return;
    }
    std::set<std::string> names;
    for (const auto& n : r.var_names)
      if (n.empty() || !names.insert(n).second) {
        report(f.name, "var-names", "display name `" + n + "` is empty or not unique");
        return;
      }
  }

  void bind(VarId v, const Rule& r, bool check_unique = true) {
    if (!bound_.insert(v).second && check_unique)
      report(*decl_, "variable-rebound", "variable `" + r.var_name(v) + "` bound more than once");
    scope_.insert(v);
  }

  void expr(const Expr& e, const Rule& r) {
    std::visit([&](const auto& n) { node(n, r); }, e.node);
  }

  void node(const Var& v, const Rule& r) {
    if (!scope_.count(v.id))
      report(*decl_, "unbound-variable", "variable `" + r.var_name(v.id) + "` is not in scope");
  }

  void node(const Lit&, const Rule&) {}

  void node(const Comb& c, const Rule& r) {
    const int given = static_cast<int>(c.args.size());
    if (c.kind == CombKind::Cons) {
      auto ref = p_.find_constructor(c.name);
      if (!ref)
        report(*decl_, "unknown-constructor", "constructor `" + c.name + "` is not declared");
      else if (ref->cons->arity != given)
        report(*decl_, "cons-arity",
               "constructor `" + c.name + "` applied to " + std::to_string(given) +
                   " argument(s), arity is " + std::to_string(ref->cons->arity));
    } else {
      int arity = -1;
      if (const FuncDecl* g = p_.find_function(c.name))
        arity = g->arity;
      else if (const Builtin* b = find_builtin(c.name))
        arity = b->arity;
      else if (c.kind == CombKind::Part) {
        if (auto ref = p_.find_constructor(c.name)) arity = ref->cons->arity;
      }
      if (arity < 0) {
        report(*decl_, "unknown-function", "function `" + c.name + "` is not declared");
      } else if (c.kind == CombKind::Fun && given != arity) {
        report(*decl_, "call-arity",
               "`" + c.name + "` called with " + std::to_string(given) + " argument(s), arity is " +
                   std::to_string(arity));
      } else if (c.kind == CombKind::Part && (c.missing < 1 || given != arity - c.missing)) {
        report(*decl_, "partial-arity",
               "partial call of `" + c.name + "` with " + std::to_string(given) +
                   " argument(s) and " + std::to_string(c.missing) + " missing, arity is " +
                   std::to_string(arity));
      }
    }
    for (const auto& a : c.args) expr(*a, r);
  }

  void node(const Case& c, const Rule& r) {
    expr(*c.scrutinee, r);
    std::set<std::string> ctors;
    std::set<std::int64_t> lits;
    std::set<std::string> owner_types;
    bool has_lit = false, has_cons = false;
    for (const auto& b : c.branches) {
      const Pattern& pat = b.pattern;
      if (pat.is_literal()) {
        has_lit = true;
        if (!lits.insert(*pat.literal).second)
          report(*decl_, "duplicate-constructor",
                 "case has two branches for literal " + std::to_string(*pat.literal));
        if (!pat.vars.empty())
          report(*decl_, "pattern-arity", "literal pattern with variables");
      } else {
        has_cons = true;
        if (!ctors.insert(pat.constructor).second)
          report(*decl_, "duplicate-constructor",
                 "case has two branches for constructor `" + pat.constructor + "`");
        auto ref = p_.find_constructor(pat.constructor);
        if (!ref) {
          report(*decl_, "unknown-constructor",
                 "pattern constructor `" + pat.constructor + "` is not declared");
        } else {
          owner_types.insert(ref->type->name);
          if (ref->cons->arity != static_cast<int>(pat.vars.size()))
            report(*decl_, "pattern-arity",
                   "pattern `" + pat.constructor + "` binds " + std::to_string(pat.vars.size()) +
                       " variable(s), arity is " + std::to_string(ref->cons->arity));
        }
      }
      std::set<VarId> seen;
      for (VarId v : pat.vars)
        if (!seen.insert(v).second)
          report(*decl_, "duplicate-pattern-var",
                 "pattern variable `" + r.var_name(v) + "` repeated");
    }
    if (has_lit && has_cons)
      report(*decl_, "mixed-literal-patterns", "case mixes literal and constructor patterns");
    if (owner_types.size() > 1)
      report(*decl_, "mixed-case-type", "case branches use constructors of different types");

    for (const auto& b : c.branches) {
      // Pattern variables are visible only in their branch.
      auto saved = scope_;
      std::set<VarId> local;
      for (VarId v : b.pattern.vars) bind(v, r, local.insert(v).second);
      expr(*b.body, r);
      scope_ = std::move(saved);
    }
  }

  void node(const Or& o, const Rule& r) {
    expr(*o.left, r);
    expr(*o.right, r);
  }

  void node(const Free& f, const Rule& r) {
    auto saved = scope_;
    for (VarId v : f.vars) bind(v, r);
    expr(*f.body, r);
    scope_ = std::move(saved);
  }

  void node(const Apply& a, const Rule& r) {
    expr(*a.fn, r);
    expr(*a.arg, r);
  }

  const Program& p_;
  std::vector<Violation> out_;
  const std::string* decl_ = nullptr;
  std::set<VarId> bound_;  // every variable bound so far in this rule
  std::set<VarId> scope_;  // variables visible at the current position
};

}  // namespace

ValidationError::ValidationError(std::vector<Violation> v)
    : Error(summarize(v)), violations(std::move(v)) {}

std::string to_string(const Violation& v) { return v.decl + ": [" + v.rule + "] " + v.message; }

std::vector<Violation> validate(const Program& program) { return Validator(program).run(); }

}  // namespace flw

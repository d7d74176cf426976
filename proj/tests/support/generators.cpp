#include "support/generators.hpp"

#include "flw/builtins.hpp"

namespace flw::testing {

namespace {

class ProgramGen {
 public:
  ProgramGen(Rng& rng, const RandomProgramOptions& o, const std::vector<int>& arities)
      : rng_(rng), o_(o), arities_(arities) {}

  Rule rule(int arity) {
    names_.clear();
    Rule r;
    std::vector<VarId> scope;
    for (int i = 0; i < arity; ++i) {
      VarId v = fresh();
      r.params.push_back(v);
      scope.push_back(v);
    }
    r.body = expr(scope, o_.max_depth);
    r.var_names = names_;
    return r;
  }

 private:
  VarId fresh() {
    VarId v = static_cast<VarId>(names_.size());
    names_.push_back("v" + std::to_string(v));
    return v;
  }

  ExprPtr leaf(const std::vector<VarId>& scope) {
    switch (rng_.below(4)) {
      case 0:
        if (!scope.empty()) return build::var(rng_.pick(scope));
        [[fallthrough]];
      case 1:
        return build::lit(static_cast<std::int64_t>(rng_.below(7)) - 3);
      case 2:
        return build::cons(rng_.chance(0.5) ? "True" : "False");
      default:
        return build::cons("[]");
    }
  }

  ExprPtr expr(std::vector<VarId> scope, int depth) {
    if (depth <= 0) return leaf(scope);
    switch (rng_.below(9)) {
      case 0:
        return leaf(scope);
      case 1:
        return build::cons(":", {expr(scope, depth - 1), expr(scope, depth - 1)});
      case 2:
      case 3: {
        std::size_t f = rng_.below(arities_.size());
        std::vector<ExprPtr> args;
        for (int i = 0; i < arities_[f]; ++i) args.push_back(expr(scope, depth - 1));
        return build::call("f" + std::to_string(f), std::move(args));
      }
      case 4: {
        if (scope.empty()) return leaf(scope);
        ExprPtr scrut = build::var(rng_.pick(scope));
        CaseKind kind = rng_.chance(0.5) ? CaseKind::Flex : CaseKind::Rigid;
        std::vector<Branch> branches;
        switch (rng_.below(3)) {
          case 0: {
            VarId h = fresh();
            VarId t = fresh();
            auto inner = scope;
            inner.push_back(h);
            inner.push_back(t);
            if (rng_.chance(0.7)) branches.push_back({Pattern::cons("[]"), expr(scope, depth - 1)});
            branches.push_back({Pattern::cons(":", {h, t}), expr(inner, depth - 1)});
            break;
          }
          case 1:
            branches.push_back({Pattern::cons("True"), expr(scope, depth - 1)});
            if (rng_.chance(0.7)) branches.push_back({Pattern::cons("False"), expr(scope, depth - 1)});
            break;
          default:
            for (std::int64_t k = 0, n = 1 + static_cast<std::int64_t>(rng_.below(3)); k < n; ++k)
              branches.push_back({Pattern::lit(k), expr(scope, depth - 1)});
        }
        return build::case_of(kind, scrut, std::move(branches));
      }
      case 5:
        if (o_.allow_or) return build::or_(expr(scope, depth - 1), expr(scope, depth - 1));
        return leaf(scope);
      case 6: {
        if (!o_.allow_free) return leaf(scope);
        VarId v = fresh();
        scope.push_back(v);
        return build::free({v}, expr(scope, depth - 1));
      }
      case 7: {
        std::size_t f = rng_.below(arities_.size());
        int arity = arities_[f];
        if (!o_.allow_apply || arity == 0) return leaf(scope);
        int missing = 1 + static_cast<int>(rng_.below(static_cast<std::size_t>(arity)));
        std::vector<ExprPtr> args;
        for (int i = 0; i < arity - missing; ++i) args.push_back(expr(scope, depth - 1));
        ExprPtr p = build::part("f" + std::to_string(f), missing, std::move(args));
        return rng_.chance(0.5) ? build::apply(p, expr(scope, depth - 1)) : p;
      }
      default:
        return build::call("+", {expr(scope, depth - 1), expr(scope, depth - 1)});
    }
  }

  Rng& rng_;
  const RandomProgramOptions& o_;
  const std::vector<int>& arities_;
  std::vector<std::string> names_;
};

GenPattern random_pattern(Rng& rng, int depth) {
  GenPattern p;
  if (depth <= 0 || rng.chance(0.35)) return p;
  p.kind = GenPattern::Kind::Con;
  if (rng.chance(0.4)) {
    p.name = "Z";
  } else {
    p.name = "Succ";
    p.args.push_back(random_pattern(rng, depth - 1));
  }
  return p;
}

std::string pattern_text(const GenPattern& p, int& counter) {
  if (p.kind == GenPattern::Kind::Var) return "v" + std::to_string(counter++);
  if (p.args.empty()) return p.name;
  std::string out = "(" + p.name;
  for (const auto& a : p.args) out += " " + pattern_text(a, counter);
  return out + ")";
}

}  // namespace

Program random_program(Rng& rng, const RandomProgramOptions& options) {
  Program p;
  p.name = "gen";
  std::vector<int> arities;
  for (std::size_t i = 0; i < options.functions; ++i) arities.push_back(static_cast<int>(rng.below(3)));
  ProgramGen gen(rng, options, arities);
  for (std::size_t i = 0; i < options.functions; ++i) {
    FuncDecl f;
    f.name = "f" + std::to_string(i);
    f.arity = arities[i];
    f.rule = gen.rule(arities[i]);
    p.functions.push_back(std::move(f));
  }
  add_missing_prelude_types(p);
  return p;
}

std::string GenDefinition::source(const std::string& fname, bool flex) const {
  std::string out = "data Nat = Z | Succ Nat\n";
  out += fname + (flex ? " eval flex\n" : " eval rigid\n");
  for (std::size_t i = 0; i < equations.size(); ++i) {
    int counter = 0;
    out += fname;
    for (const auto& p : equations[i]) out += " " + pattern_text(p, counter);
    out += " = " + std::to_string(i) + "\n";
  }
  return out;
}

GenDefinition random_definition(Rng& rng, std::size_t max_equations, std::size_t max_arity, int max_depth) {
  GenDefinition d;
  d.arity = 1 + rng.below(max_arity);
  std::size_t n = 1 + rng.below(max_equations);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<GenPattern> eq;
    for (std::size_t k = 0; k < d.arity; ++k) eq.push_back(random_pattern(rng, max_depth));
    d.equations.push_back(std::move(eq));
  }
  return d;
}

bool matches(const GenPattern& p, int n) {
  if (p.kind == GenPattern::Kind::Var) return true;
  if (p.name == "Z") return n == 0;
  return n > 0 && matches(p.args[0], n - 1);
}

std::vector<std::string> ground_instances(const GenPattern& p, int depth) {
  std::vector<std::string> out;
  for (int n = 0; n <= depth; ++n)
    if (matches(p, n)) out.push_back(numeral(n));
  return out;
}

std::string numeral(int n) {
  std::string out = "Z";
  for (int i = 0; i < n; ++i) out = "(Succ " + out + ")";
  return out;
}

}  // namespace flw::testing

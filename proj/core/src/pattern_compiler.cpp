#include "flw/pattern_compiler.hpp"

#include <algorithm>

#include "flw/builtins.hpp"

namespace flw {

namespace {

[[noreturn]] void pattern_error(const std::string& msg, const SPat& p) {
  throw ParseError(msg, p.loc.line, p.loc.column);
}

class Matcher {
 public:
  Matcher(CaseKind kind, const Symbols& symbols, VarNames& names)
      : kind_(kind), sym_(symbols), names_(names) {}

  ExprPtr match(const std::vector<VarId>& cols, std::vector<MatchRow> rows) {
    if (std::all_of(rows.begin(), rows.end(), [](const MatchRow& r) { return all_vars(r); })) {
      std::vector<ExprPtr> bodies;
      for (auto& r : rows) {
        for (std::size_t i = 0; i < cols.size(); ++i)
          if (r.patterns[i].kind == SPat::Kind::Var) r.env[r.patterns[i].name] = cols[i];
        bodies.push_back(r.leaf(r.env, names_));
      }
      return join(std::move(bodies));
    }

    for (std::size_t j = 0; j < cols.size(); ++j) {
      std::string key = type_key(rows.front().patterns[j]);
      if (key.empty()) continue;
      bool uniform = std::all_of(rows.begin(), rows.end(), [&](const MatchRow& r) {
        return type_key(r.patterns[j]) == key;
      });
      if (uniform) return split_on(cols, std::move(rows), j, key);
    }

    // No column discriminates all rows: separate the first row's group.
    const MatchRow& first = rows.front();
    std::optional<std::size_t> col;
    for (std::size_t j = 0; j < cols.size() && !col; ++j)
      if (!first.patterns[j].is_var_like()) col = j;
    std::vector<MatchRow> a, b;
    if (!col) {
      a.push_back(std::move(rows.front()));
      b.assign(std::make_move_iterator(rows.begin() + 1), std::make_move_iterator(rows.end()));
    } else {
      std::string key = type_key(first.patterns[*col]);
      for (auto& r : rows) (type_key(r.patterns[*col]) == key ? a : b).push_back(std::move(r));
    }
    ExprPtr left = match(cols, std::move(a));
    return build::or_(std::move(left), match(cols, std::move(b)));
  }

 private:
  static bool all_vars(const MatchRow& r) {
    return std::all_of(r.patterns.begin(), r.patterns.end(),
                       [](const SPat& p) { return p.is_var_like(); });
  }

  static ExprPtr join(std::vector<ExprPtr> bodies) {
    ExprPtr e = std::move(bodies.back());
    for (std::size_t i = bodies.size() - 1; i-- > 0;) e = build::or_(std::move(bodies[i]), std::move(e));
    return e;
  }

  // Name of the type a constructor or literal pattern matches; empty for
  // variables.
  std::string type_key(const SPat& p) const {
    if (p.kind == SPat::Kind::Lit) return std::string(kIntType);
    if (p.kind != SPat::Kind::Con) return {};
    const TypeDecl* t = sym_.owner(p.name);
    if (!t) pattern_error("unknown constructor `" + p.name + "` in pattern", p);
    const ConsDecl* c = sym_.constructor(p.name);
    if (c->arity != static_cast<int>(p.args.size()))
      pattern_error("constructor `" + p.name + "` expects " + std::to_string(c->arity) +
                        " argument(s), pattern has " + std::to_string(p.args.size()),
                    p);
    return t->name;
  }

  ExprPtr split_on(const std::vector<VarId>& cols, std::vector<MatchRow> rows, std::size_t j,
                   const std::string& key) {
    // Branch order: constructor declaration order, or first appearance for
    // literals.
    std::vector<SPat> heads;
    if (key == kIntType) {
      for (const auto& r : rows) {
        const SPat& p = r.patterns[j];
        if (std::none_of(heads.begin(), heads.end(), [&](const SPat& h) { return h.value == p.value; }))
          heads.push_back(SPat::lit(p.value));
      }
    } else {
      for (const auto& c : sym_.owner(rows.front().patterns[j].name)->constructors)
        if (std::any_of(rows.begin(), rows.end(),
                        [&](const MatchRow& r) { return r.patterns[j].name == c.name; }))
          heads.push_back(SPat::con(c.name));
    }

    std::vector<Branch> branches;
    for (const SPat& h : heads) {
      auto matches = [&](const SPat& p) {
        return h.kind == SPat::Kind::Lit ? p.value == h.value : p.name == h.name;
      };
      std::vector<VarId> fresh;
      if (h.kind == SPat::Kind::Con) {
        const MatchRow& witness =
            *std::find_if(rows.begin(), rows.end(), [&](const MatchRow& r) { return matches(r.patterns[j]); });
        for (const SPat& sub : witness.patterns[j].args)
          fresh.push_back(sub.kind == SPat::Kind::Var ? names_.fresh(sub.display())
                                                      : names_.fresh("x", true));
      }
      std::vector<VarId> sub_cols(cols.begin(), cols.begin() + j);
      sub_cols.insert(sub_cols.end(), fresh.begin(), fresh.end());
      sub_cols.insert(sub_cols.end(), cols.begin() + j + 1, cols.end());

      std::vector<MatchRow> sub_rows;
      for (const auto& r : rows) {
        if (!matches(r.patterns[j])) continue;
        MatchRow s;
        s.env = r.env;
        s.leaf = r.leaf;
        s.patterns.assign(r.patterns.begin(), r.patterns.begin() + j);
        s.patterns.insert(s.patterns.end(), r.patterns[j].args.begin(), r.patterns[j].args.end());
        s.patterns.insert(s.patterns.end(), r.patterns.begin() + j + 1, r.patterns.end());
        sub_rows.push_back(std::move(s));
      }
      Pattern pat = h.kind == SPat::Kind::Lit ? Pattern::lit(h.value) : Pattern::cons(h.name, fresh);
      branches.push_back({std::move(pat), match(sub_cols, std::move(sub_rows))});
    }
    return build::case_of(kind_, build::var(cols[j]), std::move(branches));
  }

  CaseKind kind_;
  const Symbols& sym_;
  VarNames& names_;
};

void collect_names(const SPat& p, VarNames& names) {
  if (p.kind == SPat::Kind::Var) names.reserve(p.display());
  for (const auto& a : p.args) collect_names(a, names);
}

CaseKind default_kind(const SurfaceDecl& d) {
  if (d.annotation) return *d.annotation;
  if (d.signature && arrow_count(*d.signature) >= d.arity()) {
    const TypeExpr& r = result_type(*d.signature, d.arity());
    if (r.is_cons() && r.name == kSuccessType && r.args.empty()) return CaseKind::Flex;
  }
  return CaseKind::Rigid;
}

}  // namespace

ExprPtr compile_match(std::vector<VarId> columns, std::vector<MatchRow> rows, CaseKind kind,
                      const Symbols& symbols, VarNames& names) {
  if (rows.empty()) throw Error("pattern matching without equations");
  return Matcher(kind, symbols, names).match(columns, std::move(rows));
}

Program compile_patterns(const SurfaceModule& module, const std::string& module_name,
                         const std::map<std::string, CaseKind>& kinds) {
  Program p;
  p.name = module_name;
  p.types = module.types;
  add_missing_prelude_types(p);
  p.operators = module.operators;

  std::map<std::string, int> arities;
  for (const auto& d : module.decls) arities[d.name] = static_cast<int>(d.arity());
  Symbols symbols(p.types, arities);

  for (const auto& d : module.decls) {
    VarNames names;
    for (const auto& eq : d.equations) {
      for (const auto& pat : eq.patterns) collect_names(pat, names);
      for (const auto& v : eq.free_vars) names.reserve(v);
    }

    std::vector<VarId> params;
    for (std::size_t i = 0; i < d.arity(); ++i) {
      auto named = std::find_if(d.equations.begin(), d.equations.end(), [&](const Equation& eq) {
        return eq.patterns[i].kind == SPat::Kind::Var;
      });
      params.push_back(named != d.equations.end() ? names.fresh(named->patterns[i].display())
                                                  : names.fresh("x", true));
    }

    std::vector<MatchRow> rows;
    for (const auto& eq : d.equations) {
      MatchRow row;
      row.patterns = eq.patterns;
      const Equation* e = &eq;
      row.leaf = [e, &symbols](const Env& env, VarNames& vn) {
        Env inner = env;
        std::vector<VarId> ids;
        for (const auto& v : e->free_vars) {
          VarId id = vn.fresh(v);
          inner[v] = id;
          ids.push_back(id);
        }
        ExprPtr body = lower_expr(*e->body, inner, vn, symbols);
        if (e->guard) body = build::call("cond", {lower_expr(*e->guard, inner, vn, symbols), body});
        if (!ids.empty()) body = build::free(std::move(ids), std::move(body));
        return body;
      };
      rows.push_back(std::move(row));
    }

    auto it = kinds.find(d.name);
    CaseKind kind = it != kinds.end() ? it->second : default_kind(d);
    ExprPtr body = compile_match(params, std::move(rows), kind, symbols, names);

    FuncDecl f;
    f.name = d.name;
    f.arity = static_cast<int>(d.arity());
    f.signature = d.signature;
    f.rule = Rule{params, std::move(body), names.names()};
    p.functions.push_back(std::move(f));
  }
  return p;
}

}  // namespace flw

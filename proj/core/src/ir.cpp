#include "flw/ir.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace flw {

QName::QName(std::string m, std::string n) : module(std::move(m)), name(std::move(n)) {
  if (module.empty() || name.empty()) throw Error("qualified name with empty component");
}

// ---------------------------------------------------------------------------
// TypeExpr

TypeExpr TypeExpr::var(std::string name) { return {Kind::Var, std::move(name), {}}; }

TypeExpr TypeExpr::cons(std::string name, std::vector<TypeExpr> args) {
  return {Kind::Cons, std::move(name), std::move(args)};
}

TypeExpr TypeExpr::func(TypeExpr domain, TypeExpr range) {
  TypeExpr t{Kind::Func, "->", {}};
  t.args.push_back(std::move(domain));
  t.args.push_back(std::move(range));
  return t;
}

namespace {

void print_type(std::ostream& os, const TypeExpr& t, bool atomic) {
  switch (t.kind) {
    case TypeExpr::Kind::Var:
      os << t.name;
      return;
    case TypeExpr::Kind::Func:
      if (atomic) os << '(';
      print_type(os, t.domain(), true);
      os << " -> ";
      print_type(os, t.range(), false);
      if (atomic) os << ')';
      return;
    case TypeExpr::Kind::Cons:
      if (t.name == "List" && t.args.size() == 1) {
        os << '[';
        print_type(os, t.args[0], false);
        os << ']';
        return;
      }
      if (t.args.empty()) {
        os << t.name;
        return;
      }
      if (atomic) os << '(';
      os << t.name;
      for (const auto& a : t.args) {
        os << ' ';
        print_type(os, a, true);
      }
      if (atomic) os << ')';
      return;
  }
}

}  // namespace

std::string to_string(const TypeExpr& t) {
  std::ostringstream os;
  print_type(os, t, false);
  return os.str();
}

std::size_t arrow_count(const TypeExpr& t) {
  std::size_t n = 0;
  for (const TypeExpr* p = &t; p->is_func(); p = &p->range()) ++n;
  return n;
}

const TypeExpr& result_type(const TypeExpr& t, std::size_t n) {
  const TypeExpr* p = &t;
  for (std::size_t i = 0; i < n && p->is_func(); ++i) p = &p->range();
  return *p;
}

// ---------------------------------------------------------------------------
// Expressions

Pattern Pattern::cons(std::string c, std::vector<VarId> vars) {
  return Pattern{std::move(c), std::move(vars), std::nullopt};
}

Pattern Pattern::lit(std::int64_t v) { return Pattern{{}, {}, v}; }

bool equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return equal(*a, *b);
}

bool equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, Var>) {
          return x.id == y.id;
        } else if constexpr (std::is_same_v<T, Lit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, Comb>) {
          if (x.kind != y.kind || x.name != y.name || x.missing != y.missing ||
              x.args.size() != y.args.size())
            return false;
          for (std::size_t i = 0; i < x.args.size(); ++i)
            if (!equal(x.args[i], y.args[i])) return false;
          return true;
        } else if constexpr (std::is_same_v<T, Case>) {
          if (x.kind != y.kind || x.branches.size() != y.branches.size()) return false;
          if (!equal(x.scrutinee, y.scrutinee)) return false;
          for (std::size_t i = 0; i < x.branches.size(); ++i) {
            if (!(x.branches[i].pattern == y.branches[i].pattern)) return false;
            if (!equal(x.branches[i].body, y.branches[i].body)) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<T, Or>) {
          return equal(x.left, y.left) && equal(x.right, y.right);
        } else if constexpr (std::is_same_v<T, Free>) {
          return x.vars == y.vars && equal(x.body, y.body);
        } else {
          return equal(x.fn, y.fn) && equal(x.arg, y.arg);
        }
      },
      a.node);
}

namespace build {

namespace {
ExprPtr make(auto node) { return std::make_shared<const Expr>(Expr{std::move(node)}); }
}  // namespace

ExprPtr var(VarId id) { return make(Var{id}); }
ExprPtr lit(std::int64_t v) { return make(Lit{v}); }
ExprPtr cons(std::string name, std::vector<ExprPtr> args) {
  return make(Comb{CombKind::Cons, std::move(name), 0, std::move(args)});
}
ExprPtr call(std::string name, std::vector<ExprPtr> args) {
  return make(Comb{CombKind::Fun, std::move(name), 0, std::move(args)});
}
ExprPtr part(std::string name, int missing, std::vector<ExprPtr> args) {
  return make(Comb{CombKind::Part, std::move(name), missing, std::move(args)});
}
ExprPtr case_of(CaseKind kind, ExprPtr scrutinee, std::vector<Branch> branches) {
  return make(Case{kind, std::move(scrutinee), std::move(branches)});
}
ExprPtr fcase(ExprPtr scrutinee, std::vector<Branch> branches) {
  return case_of(CaseKind::Flex, std::move(scrutinee), std::move(branches));
}
ExprPtr rcase(ExprPtr scrutinee, std::vector<Branch> branches) {
  return case_of(CaseKind::Rigid, std::move(scrutinee), std::move(branches));
}
ExprPtr or_(ExprPtr left, ExprPtr right) { return make(Or{std::move(left), std::move(right)}); }
ExprPtr free(std::vector<VarId> vars, ExprPtr body) {
  return make(Free{std::move(vars), std::move(body)});
}
ExprPtr apply(ExprPtr fn, ExprPtr arg) { return make(Apply{std::move(fn), std::move(arg)}); }
ExprPtr list(std::vector<ExprPtr> elems) {
  ExprPtr acc = cons("[]");
  for (auto it = elems.rbegin(); it != elems.rend(); ++it) acc = cons(":", {*it, acc});
  return acc;
}

}  // namespace build

// ---------------------------------------------------------------------------
// Declarations

std::string Rule::var_name(VarId id) const {
  if (id >= 0 && static_cast<std::size_t>(id) < var_names.size() && !var_names[id].empty())
    return var_names[id];
  return "v" + std::to_string(id);
}

const FuncDecl* Program::find_function(std::string_view n) const {
  for (const auto& f : functions)
    if (f.name == n) return &f;
  return nullptr;
}

FuncDecl* Program::find_function(std::string_view n) {
  for (auto& f : functions)
    if (f.name == n) return &f;
  return nullptr;
}

std::optional<Program::ConsRef> Program::find_constructor(std::string_view n) const {
  for (const auto& t : types)
    for (const auto& c : t.constructors)
      if (c.name == n) return ConsRef{&t, &c};
  return std::nullopt;
}

const TypeDecl* Program::find_type(std::string_view n) const {
  for (const auto& t : types)
    if (t.name == n) return &t;
  return nullptr;
}

bool operator==(const Rule& a, const Rule& b) {
  return a.params == b.params && a.var_names == b.var_names && equal(a.body, b.body);
}

bool operator==(const FuncDecl& a, const FuncDecl& b) {
  return a.name == b.name && a.arity == b.arity && a.signature == b.signature &&
         a.rule == b.rule;
}

bool operator==(const Program& a, const Program& b) {
  return a.name == b.name && a.imports == b.imports && a.types == b.types &&
         a.functions == b.functions && a.operators == b.operators &&
         a.name_table == b.name_table;
}

// ---------------------------------------------------------------------------
// Alpha-equivalence

namespace {

struct AlphaMap {
  std::map<VarId, VarId> fwd, bwd;

  bool bind(VarId a, VarId b) {
    auto [fi, fnew] = fwd.emplace(a, b);
    auto [bi, bnew] = bwd.emplace(b, a);
    return fi->second == b && bi->second == a;
  }
  bool same(VarId a, VarId b) const {
    auto it = fwd.find(a);
    return it != fwd.end() && it->second == b;
  }
};

bool alpha(const Expr& a, const Expr& b, AlphaMap& m) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, Var>) {
          return m.same(x.id, y.id);
        } else if constexpr (std::is_same_v<T, Lit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, Comb>) {
          if (x.kind != y.kind || x.name != y.name || x.missing != y.missing ||
              x.args.size() != y.args.size())
            return false;
          for (std::size_t i = 0; i < x.args.size(); ++i)
            if (!alpha(*x.args[i], *y.args[i], m)) return false;
          return true;
        } else if constexpr (std::is_same_v<T, Case>) {
          if (x.kind != y.kind || x.branches.size() != y.branches.size()) return false;
          if (!alpha(*x.scrutinee, *y.scrutinee, m)) return false;
          for (std::size_t i = 0; i < x.branches.size(); ++i) {
            const auto& pa = x.branches[i].pattern;
            const auto& pb = y.branches[i].pattern;
            if (pa.constructor != pb.constructor || pa.literal != pb.literal ||
                pa.vars.size() != pb.vars.size())
              return false;
            for (std::size_t k = 0; k < pa.vars.size(); ++k)
              if (!m.bind(pa.vars[k], pb.vars[k])) return false;
            if (!alpha(*x.branches[i].body, *y.branches[i].body, m)) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<T, Or>) {
          return alpha(*x.left, *y.left, m) && alpha(*x.right, *y.right, m);
        } else if constexpr (std::is_same_v<T, Free>) {
          if (x.vars.size() != y.vars.size()) return false;
          for (std::size_t k = 0; k < x.vars.size(); ++k)
            if (!m.bind(x.vars[k], y.vars[k])) return false;
          return alpha(*x.body, *y.body, m);
        } else {
          return alpha(*x.fn, *y.fn, m) && alpha(*x.arg, *y.arg, m);
        }
      },
      a.node);
}

}  // namespace

bool alpha_equivalent(const Rule& a, const Rule& b) {
  if (a.params.size() != b.params.size()) return false;
  AlphaMap m;
  for (std::size_t i = 0; i < a.params.size(); ++i)
    if (!m.bind(a.params[i], b.params[i])) return false;
  return alpha(*a.body, *b.body, m);
}

// ---------------------------------------------------------------------------
// Pretty printing

namespace {

bool is_operator_name(std::string_view n) {
  return !n.empty() && !std::isalnum(static_cast<unsigned char>(n[0])) && n[0] != '_' &&
         n != "[]";
}

class Printer {
 public:
  explicit Printer(const std::vector<std::string>& names) : names_(names) {}

  void expr(std::ostream& os, const Expr& e, bool atomic) const {
    std::visit([&](const auto& n) { print(os, n, atomic); }, e.node);
  }

 private:
  std::string name(VarId id) const {
    if (id >= 0 && static_cast<std::size_t>(id) < names_.size() && !names_[id].empty())
      return names_[id];
    return "v" + std::to_string(id);
  }

  void print(std::ostream& os, const Var& v, bool) const { os << name(v.id); }

  void print(std::ostream& os, const Lit& l, bool atomic) const {
    if (l.value < 0 && atomic)
      os << '(' << l.value << ')';
    else
      os << l.value;
  }

  // Returns true when `e` is a `:`/`[]` chain ending in `[]`.
  static bool closed_list(const Expr& e, std::vector<const Expr*>& elems) {
    const Expr* p = &e;
    while (true) {
      const auto* c = p->as<Comb>();
      if (!c || c->kind != CombKind::Cons) return false;
      if (c->name == "[]" && c->args.empty()) return true;
      if (c->name != ":" || c->args.size() != 2) return false;
      elems.push_back(c->args[0].get());
      p = c->args[1].get();
    }
  }

  void print(std::ostream& os, const Comb& c, bool atomic) const {
    if (c.kind == CombKind::Cons) {
      std::vector<const Expr*> elems;
      Expr self{c};
      if (closed_list(self, elems)) {
        os << '[';
        for (std::size_t i = 0; i < elems.size(); ++i) {
          if (i) os << ',';
          expr(os, *elems[i], false);
        }
        os << ']';
        return;
      }
    }
    if (c.args.empty()) {
      if (is_operator_name(c.name))
        os << '(' << c.name << ')';
      else
        os << c.name;
      return;
    }
    if (c.kind != CombKind::Part && c.args.size() == 2 && is_operator_name(c.name)) {
      if (atomic) os << '(';
      expr(os, *c.args[0], true);
      os << ' ' << c.name << ' ';
      expr(os, *c.args[1], true);
      if (atomic) os << ')';
      return;
    }
    if (atomic) os << '(';
    if (is_operator_name(c.name))
      os << '(' << c.name << ')';
    else
      os << c.name;
    for (const auto& a : c.args) {
      os << ' ';
      expr(os, *a, true);
    }
    if (atomic) os << ')';
  }

  void pattern(std::ostream& os, const Pattern& p) const {
    if (p.is_literal()) {
      os << *p.literal;
      return;
    }
    if (p.constructor == ":" && p.vars.size() == 2) {
      os << name(p.vars[0]) << ':' << name(p.vars[1]);
      return;
    }
    os << p.constructor;
    for (VarId v : p.vars) os << ' ' << name(v);
  }

  void print(std::ostream& os, const Case& c, bool atomic) const {
    if (atomic) os << '(';
    os << (c.kind == CaseKind::Flex ? "fcase " : "case ");
    expr(os, *c.scrutinee, false);
    os << " of {";
    for (std::size_t i = 0; i < c.branches.size(); ++i) {
      if (i) os << "; ";
      pattern(os, c.branches[i].pattern);
      os << " -> ";
      expr(os, *c.branches[i].body, false);
    }
    os << '}';
    if (atomic) os << ')';
  }

  void print(std::ostream& os, const Or& o, bool atomic) const {
    if (atomic) os << '(';
    expr(os, *o.left, true);
    os << " or ";
    expr(os, *o.right, true);
    if (atomic) os << ')';
  }

  void print(std::ostream& os, const Free& f, bool atomic) const {
    if (atomic) os << '(';
    os << "let ";
    for (std::size_t i = 0; i < f.vars.size(); ++i) {
      if (i) os << ", ";
      os << name(f.vars[i]);
    }
    os << " free in ";
    expr(os, *f.body, false);
    if (atomic) os << ')';
  }

  void print(std::ostream& os, const Apply& a, bool atomic) const {
    if (atomic) os << '(';
    os << "apply ";
    expr(os, *a.fn, true);
    os << ' ';
    expr(os, *a.arg, true);
    if (atomic) os << ')';
  }

  const std::vector<std::string>& names_;
};

}  // namespace

std::string format_expr(const Expr& e, const std::vector<std::string>& names) {
  std::ostringstream os;
  Printer(names).expr(os, e, false);
  return os.str();
}

std::string format_rule(const FuncDecl& f) {
  std::ostringstream os;
  os << f.name;
  if (const Rule* r = f.as_rule()) {
    for (VarId p : r->params) os << ' ' << r->var_name(p);
    os << " = " << format_expr(*r->body, r->var_names);
  } else {
    os << " external \"" << std::get<External>(f.rule).tag << '"';
  }
  return os.str();
}

}  // namespace flw

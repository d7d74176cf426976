#include "flw/types.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "flw/builtins.hpp"

namespace flw {

namespace {

std::string var_label(std::size_t i) {
  std::string s(1, static_cast<char>('a' + i % 26));
  if (i >= 26) s += std::to_string(i / 26);
  return s;
}

// Type terms live in a union-find store; index -1 is never used.
class TypeStore {
 public:
  enum class Kind { Var, Con, Skolem };

  int fresh() { return add({Kind::Var, {}, {}, -1}); }
  int con(std::string name, std::vector<int> args = {}) {
    return add({Kind::Con, std::move(name), std::move(args), -1});
  }
  int arrow(int a, int b) { return con("->", {a, b}); }

  int find(int t) {
    while (nodes_[t].kind == Kind::Var && nodes_[t].ref >= 0) t = nodes_[t].ref;
    return t;
  }

  struct Clash {
    int a, b;
    bool occurs;
  };

  // Throws Clash.
  void unify(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    Node& na = nodes_[a];
    Node& nb = nodes_[b];
    if (na.kind == Kind::Var) return bind(a, b);
    if (nb.kind == Kind::Var) return bind(b, a);
    if (na.kind == Kind::Skolem || nb.kind == Kind::Skolem) throw Clash{a, b, false};
    if (na.name != nb.name || na.args.size() != nb.args.size()) throw Clash{a, b, false};
    std::vector<int> xs = na.args, ys = nb.args;
    for (std::size_t i = 0; i < xs.size(); ++i) unify(xs[i], ys[i]);
  }

  /// Instantiates `t`; type variables map through `vars` (fresh on first
  /// sight, or rigid skolems when `rigid`).
  int from_expr(const TypeExpr& t, std::map<std::string, int>& vars, bool rigid = false) {
    switch (t.kind) {
      case TypeExpr::Kind::Var: {
        auto it = vars.find(t.name);
        if (it != vars.end()) return it->second;
        int v = rigid ? add({Kind::Skolem, t.name, {}, -1}) : fresh();
        vars.emplace(t.name, v);
        return v;
      }
      case TypeExpr::Kind::Func:
        return arrow(from_expr(t.domain(), vars, rigid), from_expr(t.range(), vars, rigid));
      case TypeExpr::Kind::Cons: {
        std::vector<int> args;
        for (const auto& a : t.args) args.push_back(from_expr(a, vars, rigid));
        return con(t.name, std::move(args));
      }
    }
    return fresh();
  }

  TypeExpr to_expr(int t, std::map<int, std::string>& names) {
    t = find(t);
    const Node& n = nodes_[t];
    switch (n.kind) {
      case Kind::Var: {
        auto it = names.find(t);
        if (it == names.end()) it = names.emplace(t, var_label(names.size())).first;
        return TypeExpr::var(it->second);
      }
      case Kind::Skolem:
        return TypeExpr::var(n.name);
      case Kind::Con: {
        if (n.name == "->") {
          auto args = n.args;
          auto d = to_expr(args[0], names);
          return TypeExpr::func(std::move(d), to_expr(args[1], names));
        }
        std::vector<TypeExpr> args;
        auto copy = n.args;
        for (int a : copy) args.push_back(to_expr(a, names));
        return TypeExpr::cons(n.name, std::move(args));
      }
    }
    return TypeExpr::var("?");
  }

  std::string show(int t) {
    std::map<int, std::string> names;
    return to_string(to_expr(t, names));
  }

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::vector<int> args;
    int ref;
  };

  int add(Node n) {
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }

  bool occurs(int v, int t) {
    t = find(t);
    if (t == v) return true;
    auto args = nodes_[t].args;
    for (int a : args)
      if (occurs(v, a)) return true;
    return false;
  }

  void bind(int v, int t) {
    if (occurs(v, t)) throw Clash{v, t, true};
    nodes_[v].ref = t;
  }

  std::vector<Node> nodes_;
};

class Inferencer {
 public:
  explicit Inferencer(const Program& p) : p_(p) {
    for (const auto& f : p.functions)
      if (f.signature) schemes_[f.name] = *f.signature;
  }

  Program run() {
    Program out = p_;
    for (const auto& scc : components()) infer_component(scc);
    for (auto& f : out.functions) f.signature = schemes_.at(f.name);
    return out;
  }

 private:
  // -- dependency order ------------------------------------------------------

  std::vector<std::vector<const FuncDecl*>> components() const {
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < p_.functions.size(); ++i) index[p_.functions[i].name] = i;
    std::vector<std::vector<std::size_t>> edges(p_.functions.size());
    for (std::size_t i = 0; i < p_.functions.size(); ++i) {
      const Rule* r = p_.functions[i].as_rule();
      if (!r) continue;
      walk(*r->body, [&](const Expr& e) {
        if (const auto* c = e.as<Comb>(); c && c->kind != CombKind::Cons) {
          auto it = index.find(c->name);
          if (it != index.end()) edges[i].push_back(it->second);
        }
      });
    }
    // Tarjan; components come out callees first.
    std::vector<int> idx(edges.size(), -1), low(edges.size(), 0);
    std::vector<bool> on_stack(edges.size(), false);
    std::vector<std::size_t> stack;
    std::vector<std::vector<const FuncDecl*>> out;
    int counter = 0;
    std::function<void(std::size_t)> visit = [&](std::size_t v) {
      idx[v] = low[v] = counter++;
      stack.push_back(v);
      on_stack[v] = true;
      for (std::size_t w : edges[v]) {
        if (idx[w] < 0) {
          visit(w);
          low[v] = std::min(low[v], low[w]);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], idx[w]);
        }
      }
      if (low[v] == idx[v]) {
        std::vector<const FuncDecl*> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(&p_.functions[w]);
        } while (w != v);
        std::reverse(comp.begin(), comp.end());
        out.push_back(std::move(comp));
      }
    };
    for (std::size_t v = 0; v < edges.size(); ++v)
      if (idx[v] < 0) visit(v);
    return out;
  }

  // -- inference --------------------------------------------------------------

  [[noreturn]] void clash(const TypeStore::Clash& c) {
    if (c.occurs)
      throw TypeError("occurs check failed in `" + *current_ + "`: cannot construct the infinite type " +
                          store_.show(c.a) + " = " + store_.show(c.b),
                      *current_);
    throw TypeError("type error in `" + *current_ + "`: cannot unify `" + store_.show(c.a) +
                        "` with `" + store_.show(c.b) + "`",
                    *current_);
  }

  void unify(int a, int b) {
    try {
      store_.unify(a, b);
    } catch (const TypeStore::Clash& c) {
      clash(c);
    }
  }

  void infer_component(const std::vector<const FuncDecl*>& scc) {
    mono_.clear();
    for (const FuncDecl* f : scc)
      if (!f->signature) mono_[f->name] = store_.fresh();

    for (const FuncDecl* f : scc) {
      current_ = &f->name;
      int t;
      if (const Rule* r = f->as_rule()) {
        t = infer_rule(*r);
      } else if (f->signature) {
        continue;  // externals are trusted
      } else {
        throw TypeError("external function `" + f->name + "` has no signature", f->name);
      }
      if (f->signature) {
        std::map<std::string, int> rigid;
        int declared = store_.from_expr(*f->signature, rigid, true);
        try {
          store_.unify(t, declared);
        } catch (const TypeStore::Clash& c) {
          throw TypeError("declared type `" + to_string(*f->signature) + "` of `" + f->name +
                              "` does not match its definition: cannot unify `" +
                              store_.show(c.a) + "` with `" + store_.show(c.b) + "`",
                          f->name);
        }
      } else {
        unify(mono_.at(f->name), t);
      }
    }
    for (const FuncDecl* f : scc) {
      if (f->signature) continue;
      std::map<int, std::string> names;
      schemes_[f->name] = store_.to_expr(mono_.at(f->name), names);
    }
  }

  int infer_rule(const Rule& r) {
    env_.assign(r.var_names.size() + 1, -1);
    std::vector<int> params;
    for (VarId v : r.params) params.push_back(var(v));
    int t = expr(*r.body);
    for (auto it = params.rbegin(); it != params.rend(); ++it) t = store_.arrow(*it, t);
    return t;
  }

  int& slot(VarId v) {
    if (v < 0) throw TypeError("negative variable id in `" + *current_ + "`", *current_);
    if (static_cast<std::size_t>(v) >= env_.size()) env_.resize(v + 1, -1);
    return env_[v];
  }

  int var(VarId v) {
    int& s = slot(v);
    if (s < 0) s = store_.fresh();
    return s;
  }

  int instantiate(const TypeExpr& scheme) {
    std::map<std::string, int> vars;
    return store_.from_expr(scheme, vars);
  }

  int constructor_type(const std::string& name) {
    auto ref = p_.find_constructor(name);
    if (!ref) throw TypeError("unknown constructor `" + name + "` in `" + *current_ + "`", *current_);
    std::vector<TypeExpr> params;
    for (const auto& tp : ref->type->type_params) params.push_back(TypeExpr::var(tp));
    TypeExpr t = TypeExpr::cons(ref->type->name, params);
    for (auto it = ref->cons->args.rbegin(); it != ref->cons->args.rend(); ++it)
      t = TypeExpr::func(*it, t);
    return instantiate(t);
  }

  int function_type(const std::string& name) {
    if (auto it = mono_.find(name); it != mono_.end()) return it->second;
    if (auto it = schemes_.find(name); it != schemes_.end()) return instantiate(it->second);
    if (const Builtin* b = find_builtin(name)) return instantiate(b->type);
    if (p_.find_constructor(name)) return constructor_type(name);
    throw TypeError("unknown function `" + name + "` in `" + *current_ + "`", *current_);
  }

  int apply_args(int t, const std::vector<ExprPtr>& args) {
    for (const auto& a : args) {
      int at = expr(*a);
      int r = store_.fresh();
      unify(t, store_.arrow(at, r));
      t = r;
    }
    return t;
  }

  int expr(const Expr& e) {
    return std::visit([&](const auto& n) { return node(n); }, e.node);
  }

  int node(const Var& v) { return var(v.id); }
  int node(const Lit&) { return store_.con(std::string(kIntType)); }

  int node(const Comb& c) {
    int t = c.kind == CombKind::Cons ? constructor_type(c.name) : function_type(c.name);
    return apply_args(t, c.args);
  }

  int node(const Case& c) {
    int scrut = expr(*c.scrutinee);
    int result = store_.fresh();
    for (const auto& b : c.branches) {
      if (b.pattern.is_literal()) {
        unify(scrut, store_.con(std::string(kIntType)));
      } else {
        int t = constructor_type(b.pattern.constructor);
        for (VarId v : b.pattern.vars) {
          int r = store_.fresh();
          unify(t, store_.arrow(var(v), r));
          t = r;
        }
        unify(scrut, t);
      }
      unify(result, expr(*b.body));
    }
    return result;
  }

  int node(const Or& o) {
    int l = expr(*o.left);
    unify(l, expr(*o.right));
    return l;
  }

  int node(const Free& f) {
    for (VarId v : f.vars) var(v);
    return expr(*f.body);
  }

  int node(const Apply& a) {
    int f = expr(*a.fn);
    int x = expr(*a.arg);
    int r = store_.fresh();
    unify(f, store_.arrow(x, r));
    return r;
  }

  const Program& p_;
  TypeStore store_;
  std::map<std::string, TypeExpr> schemes_;
  std::map<std::string, int> mono_;
  std::vector<int> env_;
  const std::string* current_ = nullptr;
};

void collect_vars(const TypeExpr& t, std::vector<std::string>& order) {
  if (t.is_var()) {
    if (std::find(order.begin(), order.end(), t.name) == order.end()) order.push_back(t.name);
    return;
  }
  for (const auto& a : t.args) collect_vars(a, order);
}

TypeExpr rename(const TypeExpr& t, const std::map<std::string, std::string>& m) {
  if (t.is_var()) return TypeExpr::var(m.at(t.name));
  TypeExpr out = t;
  for (auto& a : out.args) a = rename(a, m);
  return out;
}

}  // namespace

TypeExpr canonical_type(const TypeExpr& t) {
  std::vector<std::string> order;
  collect_vars(t, order);
  std::map<std::string, std::string> m;
  for (std::size_t i = 0; i < order.size(); ++i) m[order[i]] = var_label(i);
  return rename(t, m);
}

Program infer_types(const Program& program) {
  Program out = Inferencer(program).run();
  for (auto& f : out.functions) f.signature = canonical_type(*f.signature);
  return out;
}

}  // namespace flw

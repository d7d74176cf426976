// Flat intermediate representation of functional-logic programs.
//
// A program is a set of functions, each defined by a single rule whose
// left-hand side has pairwise distinct variables.  Pattern matching is
// explicit: rigid `case` residuates on unbound scrutinees, flexible `fcase`
// narrows them.  Overlapping definitions appear as `or` nodes.
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "flw/errors.hpp"

namespace flw {

/// A module-qualified name, printed as `module.name`.
struct QName {
  std::string module;
  std::string name;

  QName(std::string module, std::string name);
  std::string str() const { return module + "." + name; }
  friend bool operator==(const QName&, const QName&) = default;
  friend auto operator<=>(const QName&, const QName&) = default;
};

// ---------------------------------------------------------------------------
// Types

struct TypeExpr {
  enum class Kind { Var, Cons, Func };

  Kind kind = Kind::Var;
  std::string name;             // variable name or type constructor
  std::vector<TypeExpr> args;   // Cons: arguments; Func: {domain, range}

  static TypeExpr var(std::string name);
  static TypeExpr cons(std::string name, std::vector<TypeExpr> args = {});
  static TypeExpr func(TypeExpr domain, TypeExpr range);

  bool is_var() const { return kind == Kind::Var; }
  bool is_cons() const { return kind == Kind::Cons; }
  bool is_func() const { return kind == Kind::Func; }
  const TypeExpr& domain() const { return args.at(0); }
  const TypeExpr& range() const { return args.at(1); }

  friend bool operator==(const TypeExpr&, const TypeExpr&) = default;
};

/// Curried arrow syntax; `List a` prints as `[a]`.
std::string to_string(const TypeExpr& t);

/// Number of curried domains of a function type.
std::size_t arrow_count(const TypeExpr& t);

/// Strips `n` arrows and returns what remains.
const TypeExpr& result_type(const TypeExpr& t, std::size_t n);

struct ConsDecl {
  std::string name;
  int arity = 0;
  std::vector<TypeExpr> args;

  friend bool operator==(const ConsDecl&, const ConsDecl&) = default;
};

struct TypeDecl {
  std::string name;
  std::vector<std::string> type_params;
  std::vector<ConsDecl> constructors;

  friend bool operator==(const TypeDecl&, const TypeDecl&) = default;
};

enum class Fixity { InfixL, InfixR, Infix };

struct OpDecl {
  std::string name;
  Fixity fixity = Fixity::InfixL;
  int precedence = 9;

  friend bool operator==(const OpDecl&, const OpDecl&) = default;
};

// ---------------------------------------------------------------------------
// Expressions

using VarId = int;

enum class CaseKind { Rigid, Flex };
enum class CombKind { Cons, Fun, Part };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Var {
  VarId id;
};

struct Lit {
  std::int64_t value;
};

/// Constructor application, saturated function call, or partial call.
struct Comb {
  CombKind kind;
  std::string name;
  int missing = 0;  // Part only
  std::vector<ExprPtr> args;
};

/// Constructor pattern `c x1 ... xn` or an integer literal pattern.
struct Pattern {
  std::string constructor;
  std::vector<VarId> vars;
  std::optional<std::int64_t> literal;

  bool is_literal() const { return literal.has_value(); }
  static Pattern cons(std::string c, std::vector<VarId> vars = {});
  static Pattern lit(std::int64_t v);

  friend bool operator==(const Pattern&, const Pattern&) = default;
};

struct Branch {
  Pattern pattern;
  ExprPtr body;
};

struct Case {
  CaseKind kind;
  ExprPtr scrutinee;
  std::vector<Branch> branches;
};

struct Or {
  ExprPtr left;
  ExprPtr right;
};

/// Introduces fresh logic variables scoped over `body`.
struct Free {
  std::vector<VarId> vars;
  ExprPtr body;
};

/// Higher-order application of an arbitrary expression.
struct Apply {
  ExprPtr fn;
  ExprPtr arg;
};

struct Expr {
  std::variant<Var, Lit, Comb, Case, Or, Free, Apply> node;

  template <class T>
  const T* as() const { return std::get_if<T>(&node); }
  template <class T>
  bool is() const { return std::holds_alternative<T>(node); }
};

/// Deep structural equality (variable ids compared literally).
bool equal(const Expr& a, const Expr& b);
bool equal(const ExprPtr& a, const ExprPtr& b);

namespace build {
ExprPtr var(VarId id);
ExprPtr lit(std::int64_t v);
ExprPtr cons(std::string name, std::vector<ExprPtr> args = {});
ExprPtr call(std::string name, std::vector<ExprPtr> args = {});
ExprPtr part(std::string name, int missing, std::vector<ExprPtr> args = {});
ExprPtr fcase(ExprPtr scrutinee, std::vector<Branch> branches);
ExprPtr rcase(ExprPtr scrutinee, std::vector<Branch> branches);
ExprPtr case_of(CaseKind kind, ExprPtr scrutinee, std::vector<Branch> branches);
ExprPtr or_(ExprPtr left, ExprPtr right);
ExprPtr free(std::vector<VarId> vars, ExprPtr body);
ExprPtr apply(ExprPtr fn, ExprPtr arg);
/// Builds the list `[e1, ..., en]` from `:` and `[]`.
ExprPtr list(std::vector<ExprPtr> elems);
}  // namespace build

// ---------------------------------------------------------------------------
// Declarations

struct Rule {
  std::vector<VarId> params;
  ExprPtr body;
  /// Display names indexed by VarId; every variable of the rule has an entry.
  std::vector<std::string> var_names;

  std::string var_name(VarId id) const;
};

struct External {
  std::string tag;
  friend bool operator==(const External&, const External&) = default;
};

struct FuncDecl {
  std::string name;
  int arity = 0;
  std::optional<TypeExpr> signature;
  std::variant<Rule, External> rule;

  const Rule* as_rule() const { return std::get_if<Rule>(&rule); }
  bool is_external() const { return std::holds_alternative<External>(rule); }
};

struct Program {
  std::string name;
  std::vector<std::string> imports;
  std::vector<TypeDecl> types;
  std::vector<FuncDecl> functions;
  std::vector<OpDecl> operators;
  std::vector<std::pair<std::string, std::string>> name_table;

  const FuncDecl* find_function(std::string_view name) const;
  FuncDecl* find_function(std::string_view name);

  struct ConsRef {
    const TypeDecl* type;
    const ConsDecl* cons;
  };
  std::optional<ConsRef> find_constructor(std::string_view name) const;
  const TypeDecl* find_type(std::string_view name) const;

  QName qualify(std::string_view fn) const { return {name, std::string(fn)}; }
};

bool operator==(const Rule& a, const Rule& b);
bool operator==(const FuncDecl& a, const FuncDecl& b);
bool operator==(const Program& a, const Program& b);

/// Alpha-equivalence of rules: variables are compared after renaming them
/// canonically in binding order.
bool alpha_equivalent(const Rule& a, const Rule& b);

/// Human-readable rendering, e.g. `fcase xs of {[] -> ys =:= zs; ...}`.
std::string format_expr(const Expr& e, const std::vector<std::string>& names);
std::string format_rule(const FuncDecl& f);

/// Calls `fn` on every node of `e` in pre-order.
template <class Fn>
void walk(const Expr& e, Fn&& fn) {
  fn(e);
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Comb>) {
          for (const auto& a : n.args) walk(*a, fn);
        } else if constexpr (std::is_same_v<T, Case>) {
          walk(*n.scrutinee, fn);
          for (const auto& b : n.branches) walk(*b.body, fn);
        } else if constexpr (std::is_same_v<T, Or>) {
          walk(*n.left, fn);
          walk(*n.right, fn);
        } else if constexpr (std::is_same_v<T, Free>) {
          walk(*n.body, fn);
        } else if constexpr (std::is_same_v<T, Apply>) {
          walk(*n.fn, fn);
          walk(*n.arg, fn);
        }
      },
      e.node);
}

}  // namespace flw

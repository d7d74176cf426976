// Surface syntax of the mini functional-logic language (`*.mcy`).
//
//   data Nat = Z | Succ Nat
//   conc :: [a] -> [a] -> [a]
//   conc eval flex
//   conc []     ys = ys
//   conc (x:xs) ys = x : conc xs ys
//   last xs | conc ys [x] =:= xs = x  where x, ys free
//
// A declaration starts in column 1, after a `;`, or inside an enclosing
// `{ ... }`.  `--` starts a line comment.
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "flw/ir.hpp"

namespace flw {

struct SourceLoc {
  int line = 0;
  int column = 0;
};

/// Nested pattern: variable, wildcard, integer literal, or constructor.
struct SPat {
  enum class Kind { Var, Wild, Lit, Con };

  Kind kind = Kind::Wild;
  std::string name;  // Var, Con
  std::string hint;  // display name of a Var when it differs from `name`
  std::int64_t value = 0;
  std::vector<SPat> args;
  SourceLoc loc;

  static SPat var(std::string name, SourceLoc loc = {});
  static SPat wild(SourceLoc loc = {});
  static SPat lit(std::int64_t v, SourceLoc loc = {});
  static SPat con(std::string name, std::vector<SPat> args = {}, SourceLoc loc = {});
  bool is_var_like() const { return kind == Kind::Var || kind == Kind::Wild; }
  const std::string& display() const { return hint.empty() ? name : hint; }
};

struct SExpr;
using SExprPtr = std::shared_ptr<const SExpr>;

struct SAlt {
  SPat pattern;
  SExprPtr body;
};

struct SExpr {
  enum class Kind { Name, Lit, App, If, LetFree, Case, List };

  Kind kind = Kind::Name;
  std::string name;                // Name
  std::int64_t value = 0;          // Lit
  std::vector<SExprPtr> args;      // App: head then arguments; If: c, t, e;
                                   // LetFree: body; Case: scrutinee; List: elements
  std::vector<std::string> vars;   // LetFree
  CaseKind case_kind = CaseKind::Rigid;
  std::vector<SAlt> alts;          // Case
  SourceLoc loc;
};

struct Equation {
  std::vector<SPat> patterns;
  SExprPtr guard;  // may be null
  SExprPtr body;
  std::vector<std::string> free_vars;
  SourceLoc loc;
};

struct SurfaceDecl {
  std::string name;
  std::vector<Equation> equations;
  std::optional<CaseKind> annotation;
  std::optional<TypeExpr> signature;
  SourceLoc loc;

  std::size_t arity() const { return equations.empty() ? 0 : equations.front().patterns.size(); }
};

struct SurfaceModule {
  std::vector<TypeDecl> types;
  std::vector<SurfaceDecl> decls;  // order of first appearance
  std::vector<OpDecl> operators;   // declared in the source
};

/// Throws ParseError for syntax errors, non-linear left-hand sides, and
/// equations of one function with different numbers of arguments.
SurfaceModule parse_surface(std::string_view source);

/// Parses one expression, optionally followed by `where x, y free`.
/// `operators` extends the builtin fixity table.
SExprPtr parse_surface_expr(std::string_view text, const std::vector<OpDecl>& operators = {},
                            std::vector<std::string>* where_free = nullptr);

// ---------------------------------------------------------------------------
// Lowering to the flat representation

/// Allocates variable ids of one rule and keeps display names unique.
class VarNames {
 public:
  /// `hint` is used verbatim when still free; otherwise a numeric suffix is
  /// added.  Generated names also avoid every reserved name.
  VarId fresh(std::string_view hint, bool generated = false);
  void reserve(const std::string& name) { reserved_.insert(name); }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::set<std::string> used_;
  std::set<std::string> reserved_;
};

using Env = std::map<std::string, VarId>;

/// Functions, builtins, and constructors visible to surface expressions.
class Symbols {
 public:
  explicit Symbols(const Program& program);
  Symbols(const std::vector<TypeDecl>& types, std::map<std::string, int> function_arities);

  std::optional<int> function_arity(const std::string& name) const;
  const ConsDecl* constructor(const std::string& name) const;
  const TypeDecl* owner(const std::string& constructor) const;

 private:
  std::vector<TypeDecl> types_;
  std::map<std::string, int> functions_;
};

/// Resolves names (locals, then functions and builtins, then constructors)
/// and builds saturated, partial, or higher-order applications.
ExprPtr lower_expr(const SExpr& e, const Env& env, VarNames& names, const Symbols& symbols);

struct Goal {
  ExprPtr expr;
  std::vector<std::string> var_names;
};

/// Parses and lowers a goal over `program`.  Logic variables must be
/// introduced with `let x free in ...` or a trailing `where x free`.
Goal parse_goal(std::string_view text, const Program& program);

}  // namespace flw

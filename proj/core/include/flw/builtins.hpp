// Built-in (external) functions and the prelude data types every front end
// makes available.
#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flw/ir.hpp"

namespace flw {

enum class BuiltinOp {
  Unify,      // =:=
  ConcAnd,    // &   concurrent conjunction
  SeqAnd,     // &>  sequential conjunction
  Cond,       // cond guard e
  Failed,     // failed
  Add, Sub, Mul, Div, Mod,
  Eq, Neq, Lt, Le, Gt, Ge,
};

struct Builtin {
  std::string name;
  int arity;
  BuiltinOp op;
  TypeExpr type;
  /// Arithmetic builtins residuate on unbound arguments.
  bool rigid;
};

std::span<const Builtin> builtins();
const Builtin* find_builtin(std::string_view name);

inline constexpr std::string_view kSuccessType = "Success";
inline constexpr std::string_view kSuccess = "Success";
inline constexpr std::string_view kTrue = "True";
inline constexpr std::string_view kFalse = "False";
inline constexpr std::string_view kNil = "[]";
inline constexpr std::string_view kCons = ":";
inline constexpr std::string_view kIntType = "Int";

/// Bool, List, and Success declarations.
std::vector<TypeDecl> prelude_types();

/// Adds every prelude type that the program does not already declare (by
/// type name or by any of its constructor names).
void add_missing_prelude_types(Program& p);

/// Default operator table for the surface language.
std::vector<OpDecl> builtin_operators();

}  // namespace flw

#include "flw/builtins.hpp"

#include <algorithm>

namespace flw {

namespace {

TypeExpr tv(const char* n) { return TypeExpr::var(n); }
TypeExpr tc(const char* n) { return TypeExpr::cons(n); }
TypeExpr fn(TypeExpr a, TypeExpr b) { return TypeExpr::func(std::move(a), std::move(b)); }
TypeExpr fn(TypeExpr a, TypeExpr b, TypeExpr c) { return fn(std::move(a), fn(std::move(b), std::move(c))); }

std::vector<Builtin> make_builtins() {
  const TypeExpr succ = tc("Success");
  const TypeExpr integer = tc("Int");
  const TypeExpr boolean = tc("Bool");
  std::vector<Builtin> b{
      {"=:=", 2, BuiltinOp::Unify, fn(tv("a"), tv("a"), succ), false},
      {"&", 2, BuiltinOp::ConcAnd, fn(succ, succ, succ), false},
      {"&>", 2, BuiltinOp::SeqAnd, fn(succ, succ, succ), false},
      {"cond", 2, BuiltinOp::Cond, fn(succ, tv("a"), tv("a")), false},
      {"failed", 0, BuiltinOp::Failed, tv("a"), false},
      {"+", 2, BuiltinOp::Add, fn(integer, integer, integer), true},
      {"-", 2, BuiltinOp::Sub, fn(integer, integer, integer), true},
      {"*", 2, BuiltinOp::Mul, fn(integer, integer, integer), true},
      {"div", 2, BuiltinOp::Div, fn(integer, integer, integer), true},
      {"mod", 2, BuiltinOp::Mod, fn(integer, integer, integer), true},
      {"==", 2, BuiltinOp::Eq, fn(integer, integer, boolean), true},
      {"/=", 2, BuiltinOp::Neq, fn(integer, integer, boolean), true},
      {"<", 2, BuiltinOp::Lt, fn(integer, integer, boolean), true},
      {"<=", 2, BuiltinOp::Le, fn(integer, integer, boolean), true},
      {">", 2, BuiltinOp::Gt, fn(integer, integer, boolean), true},
      {">=", 2, BuiltinOp::Ge, fn(integer, integer, boolean), true},
  };
  return b;
}

}  // namespace

std::span<const Builtin> builtins() {
  static const std::vector<Builtin> table = make_builtins();
  return table;
}

const Builtin* find_builtin(std::string_view name) {
  for (const auto& b : builtins())
    if (b.name == name) return &b;
  return nullptr;
}

std::vector<TypeDecl> prelude_types() {
  TypeDecl boolean{"Bool", {}, {{"True", 0, {}}, {"False", 0, {}}}};
  TypeDecl list{"List",
                {"a"},
                {{"[]", 0, {}},
                 {":", 2, {TypeExpr::var("a"), TypeExpr::cons("List", {TypeExpr::var("a")})}}}};
  TypeDecl success{"Success", {}, {{"Success", 0, {}}}};
  return {boolean, list, success};
}

void add_missing_prelude_types(Program& p) {
  std::vector<TypeDecl> missing;
  for (auto& t : prelude_types()) {
    bool clash = p.find_type(t.name) != nullptr;
    for (const auto& c : t.constructors) clash = clash || p.find_constructor(c.name).has_value();
    if (!clash) missing.push_back(std::move(t));
  }
  p.types.insert(p.types.begin(), missing.begin(), missing.end());
}

std::vector<OpDecl> builtin_operators() {
  return {
      {"&", Fixity::InfixR, 0},  {"&>", Fixity::InfixR, 0}, {"=:=", Fixity::Infix, 4},
      {"==", Fixity::Infix, 4},  {"/=", Fixity::Infix, 4},  {"<", Fixity::Infix, 4},
      {"<=", Fixity::Infix, 4},  {">", Fixity::Infix, 4},   {">=", Fixity::Infix, 4},
      {":", Fixity::InfixR, 5},  {"+", Fixity::InfixL, 6},  {"-", Fixity::InfixL, 6},
      {"*", Fixity::InfixL, 7},
  };
}

}  // namespace flw

// Pure Prolog front end: clauses become flexible constraint functions.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "flw/ir.hpp"
#include "flw/surface.hpp"

namespace flw {

struct PTerm {
  enum class Kind { Var, Atom, Int, Compound };

  Kind kind = Kind::Atom;
  std::string name;  // variable name, atom, or functor; lists use `[]` and `.`
  std::int64_t value = 0;
  std::vector<PTerm> args;
  SourceLoc loc;

  static PTerm var(std::string name, SourceLoc loc = {});
  static PTerm atom(std::string name, SourceLoc loc = {});
  static PTerm integer(std::int64_t v, SourceLoc loc = {});
  static PTerm compound(std::string name, std::vector<PTerm> args, SourceLoc loc = {});
};

std::string to_string(const PTerm& t);

struct PrologClause {
  PTerm head;
  std::vector<PTerm> body;  // conjunction of goals; empty for facts
  SourceLoc loc;
};

/// ISO-style term syntax with `%` and `/* */` comments.  Throws ParseError.
std::vector<PrologClause> parse_prolog(std::string_view text);

/// Predicate `p/n` becomes a flexible function `p` of arity n with result
/// type Success (a second arity of the same name is renamed `p_n`).
///
/// A predicate with several clauses and an argument position that is
/// constructor-rooted in every clause keeps its head patterns, which are
/// compiled into fcase.  Otherwise each non-variable head argument is
/// replaced by a fresh variable and an `=:=` equation, and the clauses are
/// joined by `or`.  Repeated head variables are renamed apart and equated
/// with `=:=`; equations precede the body goals in a `&>` chain.  Atoms and
/// functors become constructors of the data type `Term`.
///
/// Cut, negation, disjunction, if-then-else, and builtins other than `=`,
/// `true`, and `fail` are rejected with a ParseError naming the construct.
Program translate_prolog(const std::vector<PrologClause>& clauses, const std::string& module_name);

}  // namespace flw

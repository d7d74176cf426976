// Compilation of multi-equation definitions with nested patterns into
// single rules with nested case/fcase and `or`.
#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "flw/ir.hpp"
#include "flw/surface.hpp"

namespace flw {

/// One equation during matching: remaining patterns (aligned with the
/// current column variables) and the variables bound so far.
struct MatchRow {
  std::vector<SPat> patterns;
  Env env;
  /// Builds the right-hand side once every pattern has been matched.
  std::function<ExprPtr(const Env&, VarNames&)> leaf;
};

/// Left-to-right match compilation.
///
/// If every remaining pattern is a variable, the rows' right-hand sides are
/// joined by `or` in order.  Otherwise the leftmost column in which every
/// row has a constructor (or literal) of one type becomes a case with one
/// branch per constructor that occurs, in declaration order.  Failing that,
/// the rows are split at the first row's leftmost constructor column into
/// those with a constructor of that type there and the rest, joined by `or`.
ExprPtr compile_match(std::vector<VarId> columns, std::vector<MatchRow> rows, CaseKind kind,
                      const Symbols& symbols, VarNames& names);

/// Compiles every declaration of `module` into a Program named
/// `module_name`.  The case kind of a function is taken from `kinds`, then
/// from its `eval` annotation, then from its signature (flex iff the result
/// type is Success), and is rigid otherwise.  Prelude types are added.
Program compile_patterns(const SurfaceModule& module, const std::string& module_name,
                         const std::map<std::string, CaseKind>& kinds = {});

}  // namespace flw

// Depth-bounded SLD resolution over parsed Prolog clauses; the oracle for
// the Prolog translation.
#pragma once

#include <string>
#include <vector>

#include "flw/prolog.hpp"

namespace flw::testing {

struct SldAnswers {
  /// One entry per answer in resolution order; each entry holds the
  /// printed bindings of the requested variables, variables normalized.
  std::vector<std::vector<std::string>> answers;
  /// Some branch hit the depth bound.
  bool truncated = false;
};

/// Solves the conjunction `goals` against `program` and reports the
/// bindings of `vars` (Prolog variable names).  Supports `=`, `true`, and
/// `fail` as builtins.
SldAnswers sld_solve(const std::vector<PrologClause>& program, const std::vector<PTerm>& goals,
                     const std::vector<std::string>& vars, int max_depth = 64);

/// Parses `text` as the body of a clause, e.g. `app(X, Y, [1,2])`.
std::vector<PTerm> parse_prolog_goal(const std::string& text);

}  // namespace flw::testing

// Ground and non-ground data terms as the oracles see them, printed in the
// evaluator's answer notation.
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace flw::testing {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { Var, Int, Con };
  Kind kind = Kind::Con;
  std::string name;  // constructor
  std::int64_t value = 0;  // Int value, Var id
  std::vector<TermPtr> args;

  static TermPtr var(std::int64_t id);
  static TermPtr integer(std::int64_t v);
  static TermPtr con(std::string name, std::vector<TermPtr> args = {});
  static TermPtr list(const std::vector<TermPtr>& elems, TermPtr tail = nullptr);
};

bool same_term(const Term& a, const Term& b);

/// `[1,2]`, `Succ (Succ Z)`, `(x : _3)` in argument position, `_3` for
/// variables.
std::string show(const Term& t, bool arg = false);

/// Renames every `_N` in `text` to `_A`, `_B`, ... in order of first
/// appearance, so answers from different engines compare equal.
std::string normalize_vars(const std::string& text);

/// All lists over `domain` of length at most `max_len`, shortest first.
std::vector<std::vector<std::int64_t>> lists_upto(const std::vector<std::int64_t>& domain, std::size_t max_len);

/// `[1,2,3]`.
std::string list_text(const std::vector<std::int64_t>& xs);

}  // namespace flw::testing

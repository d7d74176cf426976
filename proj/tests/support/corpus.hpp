// Source programs shared by the tests.
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "flw/frontend.hpp"
#include "flw/ir.hpp"

namespace flw::testing {

inline constexpr const char* kConcSource = R"(conc :: [a] -> [a] -> [a]
conc eval flex
conc []     ys = ys
conc (x:xs) ys = x : conc xs ys

last xs | conc ys [x] =:= xs = x  where x, ys free
)";

inline constexpr const char* kLeqSource = R"(data Nat = Z | Succ Nat

infix 4 ≤
(≤) :: Nat -> Nat -> Bool
Z      ≤ n      = True
Succ m ≤ Z      = False
Succ m ≤ Succ n = m ≤ n
)";

inline constexpr const char* kAppSource = R"(app([], Ys, Ys).
app([X|Xs], Ys, [X|Zs]) :- app(Xs, Ys, Zs).
)";

inline constexpr const char* kResiduationSource = R"(isZero :: Int -> Success
isZero eval rigid
isZero x = case x of { 0 -> success }

coin = 0
coin = 1

double x = x + x
)";

std::shared_ptr<const Program> load_shared(const std::string& source, Lang lang = Lang::Mcy,
                                           const std::string& module = "main");

/// An or-free, free-variable-free program with a goal in its fragment.
struct CorpusEntry {
  std::string name;
  std::string source;
  std::string goal;
};

/// The deterministic corpus used by the big-step oracle comparisons.
const std::vector<CorpusEntry>& deterministic_corpus();

}  // namespace flw::testing

// Source programs shared by the benchmarks.
#pragma once

#include <string>

namespace flw::bench {

inline const char* kConc = R"(conc :: [a] -> [a] -> [a]
conc eval flex
conc []     ys = ys
conc (x:xs) ys = x : conc xs ys

last xs | conc ys [x] =:= xs = x  where x, ys free
)";

inline const char* kQsort = R"(qsort :: [Int] -> [Int]
qsort []     = []
qsort (p:xs) = append (qsort (smaller p xs)) (p : qsort (larger p xs))

smaller :: Int -> [Int] -> [Int]
smaller p []     = []
smaller p (x:xs) = if x < p then x : smaller p xs else smaller p xs

larger :: Int -> [Int] -> [Int]
larger p []     = []
larger p (x:xs) = if x < p then larger p xs else x : larger p xs

append :: [a] -> [a] -> [a]
append []     ys = ys
append (x:xs) ys = x : append xs ys
)";

inline const char* kApp = R"(app([], Ys, Ys).
app([X|Xs], Ys, [X|Zs]) :- app(Xs, Ys, Zs).
)";

/// `[first, first+1, ..., first+n-1]` in surface syntax.
inline std::string int_list(int n, int first = 1) {
  std::string s = "[";
  for (int i = 0; i < n; ++i) s += (i ? "," : "") + std::to_string(first + i);
  return s + "]";
}

/// A pseudo-random permutation-like list of length n.
inline std::string shuffled_list(int n) {
  std::string s = "[";
  for (int i = 0; i < n; ++i) s += (i ? "," : "") + std::to_string((i * 7919) % (n + 13));
  return s + "]";
}

}  // namespace flw::bench

#include "support/corpus.hpp"

namespace flw::testing {

std::shared_ptr<const Program> load_shared(const std::string& source, Lang lang, const std::string& module) {
  return std::make_shared<const Program>(load_program(source, lang, module));
}

namespace {

const char* kPeano = R"(data Nat = Z | Succ Nat
add Z n = n
add (Succ m) n = Succ (add m n)
mul Z n = Z
mul (Succ m) n = add n (mul m n)
)";

const char* kListLib = R"(len [] = 0
len (x:xs) = 1 + len xs
sum [] = 0
sum (x:xs) = x + sum xs
app [] ys = ys
app (x:xs) ys = x : app xs ys
)";

}  // namespace

const std::vector<CorpusEntry>& deterministic_corpus() {
  static const std::vector<CorpusEntry> corpus = [] {
    std::vector<CorpusEntry> c;
    auto add = [&](std::string name, std::string source, std::string goal) {
      c.push_back({std::move(name), std::move(source), std::move(goal)});
    };
    add("append", kListLib, "app [1,2] [3,4]");
    add("length", kListLib, "len [7,8,9]");
    add("sum", kListLib, "sum [1,2,3,4,5]");
    add("reverse", std::string(kListLib) + "rev [] = []\nrev (x:xs) = app (rev xs) [x]\n", "rev [1,2,3,4]");
    add("factorial", "fact n = if n == 0 then 1 else n * fact (n - 1)\n", "fact 6");
    add("fibonacci", "fib n = if n < 2 then n else fib (n - 1) + fib (n - 2)\n", "fib 10");
    add("peano-add", kPeano, "add (Succ Z) (Succ (Succ Z))");
    add("peano-mul", kPeano, "mul (Succ (Succ Z)) (Succ (Succ (Succ Z)))");
    add("leq", kLeqSource, "Succ Z ≤ Succ (Succ Z)");
    add("leq-false", kLeqSource, "Succ (Succ Z) ≤ Succ Z");
    add("map-partial",
        "map f [] = []\nmap f (x:xs) = f x : map f xs\nplus x y = x + y\n",
        "map (plus 10) [1,2,3]");
    add("foldr", "foldr f z [] = z\nfoldr f z (x:xs) = f x (foldr f z xs)\nplus x y = x + y\n",
        "foldr plus 0 [1,2,3,4]");
    add("filter",
        "filter p [] = []\nfilter p (x:xs) = if p x then x : filter p xs else filter p xs\n"
        "even n = mod n 2 == 0\n",
        "filter even [1,2,3,4,5,6]");
    add("quicksort",
        std::string(kListLib) +
            "qsort [] = []\nqsort (x:xs) = app (qsort (smaller x xs)) (x : qsort (larger x xs))\n"
            "smaller p [] = []\nsmaller p (y:ys) = if y < p then y : smaller p ys else smaller p ys\n"
            "larger p [] = []\nlarger p (y:ys) = if y < p then larger p ys else y : larger p ys\n",
        "qsort [3,1,4,1,5,9,2,6]");
    add("take-infinite",
        "take n xs = if n == 0 then [] else takeCons n xs\n"
        "takeCons n (x:xs) = x : take (n - 1) xs\n"
        "from n = n : from (n + 1)\n",
        "take 3 (from 5)");
    add("pairs", "data Pair a b = Pair a b\nzip [] ys = []\nzip (x:xs) ys = zip2 x xs ys\n"
        "zip2 x xs [] = []\nzip2 x xs (y:ys) = Pair x y : zip xs ys\n",
        "zip [1,2,3] [4,5]");
    add("tree",
        "data Tree = Leaf | Node Tree Int Tree\n"
        "insert x Leaf = Node Leaf x Leaf\n"
        "insert x (Node l y r) = if x < y then Node (insert x l) y r else Node l y (insert x r)\n"
        "flatten Leaf = []\nflatten (Node l x r) = app (flatten l) (x : flatten r)\n"
        "app [] ys = ys\napp (x:xs) ys = x : app xs ys\n"
        "build [] = Leaf\nbuild (x:xs) = insert x (build xs)\n",
        "flatten (build [5,2,8,1,9])");
    add("maximum", "maxl (x:xs) = go x xs\ngo m [] = m\ngo m (y:ys) = if y > m then go y ys else go m ys\n",
        "maxl [3,9,2,7]");
    add("ackermann",
        "ack m n = if m == 0 then n + 1 else if n == 0 then ack (m - 1) 1 else ack (m - 1) (ack m (n - 1))\n",
        "ack 2 2");
    add("gcd", "gcd a b = if b == 0 then a else gcd b (mod a b)\n", "gcd 84 36");
    add("booleans", "not True = False\nnot False = True\nand True b = b\nand False b = False\n",
        "and (not False) (not (not True))");
    add("lazy-argument", "k x y = x\n", "k 1 (div 1 0)");
    add("sharing", "double x = x + x\n", "double (1 + 2)");
    add("twice", "twice f x = f (f x)\ninc x = x + 1\n", "twice inc 5");
    add("negative", "neg x = 0 - x\nwrap x = [neg x]\n", "wrap 4");
    add("nested-case",
        "data Color = Red | Green | Blue\n"
        "next Red = Green\nnext Green = Blue\nnext Blue = Red\n"
        "cycle n c = if n == 0 then c else cycle (n - 1) (next c)\n",
        "cycle 7 Red");
    return c;
  }();
  return corpus;
}

}  // namespace flw::testing

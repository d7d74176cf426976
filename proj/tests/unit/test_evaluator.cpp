#include <algorithm>
#include <map>
#include <set>

#include "doctest.h"
#include "flw/machine.hpp"
#include "flw/solve.hpp"
#include "support/bigstep.hpp"
#include "support/corpus.hpp"
#include "support/generators.hpp"
#include "support/terms.hpp"

using namespace flw;
using namespace flw::testing;

namespace {

const char* kNatSource = R"(data Nat = Z | Succ Nat
isz eval flex
isz Z = True
isz (Succ n) = False
add eval flex
add Z n = n
add (Succ m) n = Succ (add m n)
)";

/// Follows alternative 0 until a terminal state, collecting step infos.
std::vector<StepInfo> run_first(MachineState s, std::size_t max_steps = 10000) {
  std::vector<StepInfo> out;
  while (is_terminal(s) == Outcome::Running && out.size() < max_steps) {
    auto succ = step(s);
    REQUIRE_FALSE(succ.empty());
    out.push_back(succ[0].info);
    s = std::move(succ[0].state);
  }
  return out;
}

MachineState final_state(MachineState s) {
  while (is_terminal(s) == Outcome::Running) s = step(s).at(0).state;
  return s;
}

std::size_t count_kind(const MachineState& s, NodeKind k) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < s.heap.size(); ++i)
    if (s.heap[i].kind == k) ++n;
  return n;
}

std::vector<std::string> answer_texts(const SolveResult& r) {
  std::vector<std::string> out;
  for (const auto& a : r.answers) out.push_back(a.text());
  return out;
}

/// Replaces each `{name}` in `pattern` by `values[name]`.
std::string fill(std::string pattern, const std::map<std::string, std::string>& values) {
  for (const auto& [k, v] : values) {
    std::string key = "{" + k + "}";
    for (auto pos = pattern.find(key); pos != std::string::npos; pos = pattern.find(key))
      pattern.replace(pos, key.size(), "(" + v + ")");
  }
  return pattern;
}

/// Invariants checked on every transition of a random walk.
void check_transition(const MachineState& before, const Successor& succ) {
  const MachineState& after = succ.state;
  // Monotone bindings and a growing heap.
  CHECK(after.heap.size() >= before.heap.size());
  for (std::size_t i = 0; i < before.heap.size(); ++i)
    if (before.heap[i].kind == NodeKind::Bound) {
      CHECK(after.heap[i].kind == NodeKind::Bound);
      CHECK(after.heap[i].target == before.heap[i].target);
    }
  // Bindings are reported only by narrowing and constraint solving.
  if (!succ.info.bound.empty())
    CHECK((succ.info.kind == StepKind::CaseNarrow || succ.info.kind == StepKind::ConstraintSolve));
  for (const auto& [v, value] : succ.info.bound) {
    CHECK(before.node(v).kind == NodeKind::Unbound);
    CHECK(after.node(v).kind == NodeKind::Bound);
  }
  if (after.failed) return;
  // Wake correctness: tasks waiting on a variable bound in this step are
  // active afterwards and reported as woken.
  for (const auto& t : before.tasks) {
    if (t.status != TaskStatus::Suspended) continue;
    if (after.node(t.waiting_on).kind == NodeKind::Unbound) continue;
    auto it = std::find_if(after.tasks.begin(), after.tasks.end(), [&](const Task& u) { return u.id == t.id; });
    if (it != after.tasks.end()) CHECK(it->status == TaskStatus::Active);
    CHECK(std::find(succ.info.woken.begin(), succ.info.woken.end(), t.id) != succ.info.woken.end());
  }
  // Suspended tasks wait on unbound variables.
  for (const auto& t : after.tasks)
    if (t.status == TaskStatus::Suspended) CHECK(after.node(after.deref(t.waiting_on)).kind == NodeKind::Unbound);
  if (is_terminal(after) == Outcome::Success)
    for (const auto& [name, id] : after.answer_vars) CHECK(is_data(after, id));
}

void random_walks(const std::shared_ptr<const Program>& p, const std::string& goal, int seeds, int max_steps) {
  CAPTURE(goal);
  for (int seed = 1; seed <= seeds; ++seed) {
    Rng rng(static_cast<std::uint64_t>(seed));
    MachineState s = inject(p, goal);
    for (int i = 0; i < max_steps && is_terminal(s) == Outcome::Running; ++i) {
      auto succ = step(s);
      REQUIRE_FALSE(succ.empty());
      auto& pick = succ[rng.below(succ.size())];
      check_transition(s, pick);
      s = pick.state;
    }
  }
}

}  // namespace

TEST_CASE("inject builds a running state with one task") {
  auto p = load_shared(kConcSource);
  MachineState s = inject(p, "conc [1] [2]");
  const HeapNode& root = s.node(s.deref(s.root));
  CHECK(root.kind == NodeKind::Fun);
  CHECK(root.name == "conc");
  CHECK(s.tasks.size() == 1);
  CHECK(is_terminal(s) == Outcome::Running);
  CHECK(s.steps == 0);
}

TEST_CASE("inject rejects unknown symbols") {
  auto p = load_shared(kConcSource);
  CHECK_THROWS_AS(inject(p, "nope [1]"), Error);
}

TEST_CASE("concurrent conjunction spawns a second task") {
  auto p = load_shared(kResiduationSource);
  MachineState s = inject(p, "x =:= 0 & isZero x where x free");
  CHECK(count_kind(s, NodeKind::Unbound) == 1);
  CHECK(s.answer_vars.size() == 1);
  auto succ = step(s);
  REQUIRE(succ.size() == 1);
  CHECK(succ[0].state.tasks.size() == 2);
}

TEST_CASE("flexible case on a free variable narrows in branch order") {
  auto p = load_shared(kNatSource);
  MachineState s = inject(p, "isz x where x free");
  auto unfold = step(s);
  REQUIRE(unfold.size() == 1);
  CHECK(unfold[0].info.kind == StepKind::FunctionUnfold);
  auto pl = plan(unfold[0].state);
  REQUIRE(pl.has_value());
  CHECK(pl->kind == StepKind::CaseNarrow);
  CHECK(pl->alternatives == 2);
  auto narrow = step(unfold[0].state);
  REQUIRE(narrow.size() == 2);
  for (const auto& n : narrow) {
    CHECK(n.info.kind == StepKind::CaseNarrow);
    REQUIRE(n.info.bound.size() == 1);
  }
  NodeId x = s.answer_vars.at(0).second;
  CHECK(show_term(narrow[0].state, x) == "Z");
  CHECK(show_term(narrow[1].state, x).rfind("Succ _", 0) == 0);
  auto texts = answer_texts(solve(p, "isz x where x free"));
  REQUIRE(texts.size() == 2);
  CHECK(texts[0] == "{x = Z} True");
  CHECK(normalize_vars(texts[1]) == "{x = Succ _A} False");
}

TEST_CASE("rigid case on a free variable suspends and flounders") {
  auto p = load_shared(kResiduationSource);
  MachineState s = inject(p, "isZero x where x free");
  auto steps = run_first(s);
  REQUIRE_FALSE(steps.empty());
  CHECK(steps.back().kind == StepKind::Suspend);
  CHECK(is_terminal(final_state(s)) == Outcome::Floundered);
  auto r = solve(p, "isZero x where x free");
  CHECK(r.answers.empty());
  CHECK(r.floundered);
}

TEST_CASE("binding a variable wakes the suspended task") {
  auto p = load_shared(kResiduationSource);
  MachineState s = inject(p, "x =:= coin & isZero x where x free");
  auto steps = run_first(s);
  bool woke = std::any_of(steps.begin(), steps.end(), [](const StepInfo& i) { return !i.woken.empty(); });
  CHECK(woke);
  CHECK(std::any_of(steps.begin(), steps.end(), [](const StepInfo& i) { return i.kind == StepKind::Suspend; }));
  MachineState end = final_state(s);
  CHECK(is_terminal(end) == Outcome::Success);
  CHECK(answer_of(end).text() == "{x = 0} Success");
  MachineState direct = inject(p, "x =:= 0 & case x of {0 -> success} where x free");
  auto direct_steps = run_first(direct);
  CHECK(std::any_of(direct_steps.begin(), direct_steps.end(), [](const StepInfo& i) { return !i.woken.empty(); }));
  CHECK(is_terminal(final_state(direct)) == Outcome::Success);
}

TEST_CASE("reflexive equation of empty lists succeeds in one step") {
  auto p = load_shared(kConcSource);
  MachineState s = inject(p, "[] =:= []");
  auto succ = step(s);
  REQUIRE(succ.size() == 1);
  CHECK(succ[0].info.kind == StepKind::ConstraintSolve);
  CHECK(is_terminal(succ[0].state) == Outcome::Success);
}

TEST_CASE("list concatenation reduces in four steps") {
  auto p = load_shared(kConcSource);
  MachineState s = inject(p, "conc [1] [2]");
  auto steps = run_first(s);
  CHECK(steps.size() == 4);
  MachineState end = final_state(s);
  CHECK(is_terminal(end) == Outcome::Success);
  CHECK(show_term(end, end.root) == "[1,2]");
  CHECK(end.steps == 4);
}

TEST_CASE("stepping a terminal state is an error") {
  auto p = load_shared(kConcSource);
  MachineState end = final_state(inject(p, "conc [] []"));
  CHECK_THROWS_AS(step(end), EvalError);
  CHECK_FALSE(plan(end).has_value());
}

TEST_CASE("shared arguments are reduced once") {
  auto p = load_shared(kResiduationSource);
  MachineState s = inject(p, "double (1 + 2)");
  auto unfold = step(s).at(0);
  const HeapNode& plus = unfold.state.node(unfold.state.deref(unfold.state.root));
  REQUIRE(plus.kind == NodeKind::Fun);
  REQUIRE(plus.args.size() == 2);
  CHECK(plus.args[0] == plus.args[1]);
  auto inner = step(unfold.state).at(0);
  CHECK(inner.info.function == "+");
  CHECK(show_term(inner.state, plus.args[0]) == "3");
  CHECK(show_term(inner.state, plus.args[1]) == "3");
  auto steps = run_first(s);
  CHECK(steps.size() == 3);
  CHECK(std::count_if(steps.begin(), steps.end(), [](const StepInfo& i) { return i.function == "+"; }) == 2);
  CHECK(show_term(final_state(s), final_state(s).root) == "6");
}

TEST_CASE("step leaves its input unchanged and shares heap chunks") {
  auto p = load_shared(kConcSource);
  std::vector<std::int64_t> big;
  for (int i = 1; i <= 100; ++i) big.push_back(i);
  MachineState s = inject(p, "conc ys [x] =:= " + list_text(big) + " where x, ys free");
  REQUIRE(s.heap.size() > 64);
  for (int i = 0; i < 3; ++i) {
    auto succ = step(s);
    REQUIRE_FALSE(succ.back().state.failed);
    s = succ.back().state;
  }
  REQUIRE(is_terminal(s) == Outcome::Running);
  std::string before = show_term(s, s.root);
  auto heap_before = s.heap.size();
  auto succ = step(s);
  CHECK(show_term(s, s.root) == before);
  CHECK(s.heap.size() == heap_before);
  CHECK(succ.at(0).state.heap.shared_chunks(s.heap) > 0);
}

TEST_CASE("solve finds the last element by narrowing") {
  auto p = load_shared(kConcSource);
  auto r = solve(p, "conc ys [x] =:= [1,2,3] where x, ys free");
  CHECK(answer_texts(r) == std::vector<std::string>{"{x = 3, ys = [1,2]} Success"});
  CHECK_FALSE(r.floundered);
  CHECK_FALSE(r.budget_exhausted);
  CHECK(answer_texts(solve(p, "last [1,2,3]")) == std::vector<std::string>{"3"});
}

TEST_CASE("or-split alternatives appear left first") {
  auto p = load_shared(kResiduationSource);
  CHECK(answer_texts(solve(p, "coin")) == std::vector<std::string>{"0", "1"});
  SolveOptions bfs;
  bfs.strategy = Strategy::Bfs;
  CHECK(answer_texts(solve(p, "coin", bfs)) == std::vector<std::string>{"0", "1"});
  SolveOptions first;
  first.max_answers = 1;
  CHECK(answer_texts(solve(p, "coin + coin", first)) == std::vector<std::string>{"0"});
  CHECK(answer_texts(solve(p, "coin + coin")) == std::vector<std::string>{"0", "1", "1", "2"});
}

TEST_CASE("sequential conjunction and guards") {
  auto p = load_shared(kConcSource);
  CHECK(answer_texts(solve(p, "x =:= 1 &> y =:= x where x, y free")) ==
        std::vector<std::string>{"{x = 1, y = 1} Success"});
  CHECK(solve(p, "x =:= 1 &> x =:= 2 where x free").answers.empty());
  CHECK(answer_texts(solve(p, "cond ([] =:= []) 5")) == std::vector<std::string>{"5"});
}

TEST_CASE("occurs check rejects cyclic bindings") {
  auto p = load_shared(kConcSource);
  auto r = solve(p, "x =:= [x] where x free");
  CHECK(r.answers.empty());
  CHECK_FALSE(r.floundered);
}

TEST_CASE("arithmetic failures prune the alternative") {
  auto p = load_shared(kResiduationSource);
  CHECK(solve(p, "div 1 0").answers.empty());
  CHECK(answer_texts(solve(p, "div (0 - 7) 2")) == std::vector<std::string>{"-4"});
  CHECK(answer_texts(solve(p, "mod (0 - 7) 2")) == std::vector<std::string>{"1"});
  CHECK(solve(p, "failed").answers.empty());
}

TEST_CASE("higher-order application saturates partial calls") {
  auto p = load_shared("twice f x = f (f x)\ninc x = x + 1\n");
  MachineState s = inject(p, "twice inc 5");
  auto steps = run_first(s);
  CHECK(std::any_of(steps.begin(), steps.end(), [](const StepInfo& i) { return i.kind == StepKind::ApplySaturate; }));
  CHECK(show_term(final_state(s), final_state(s).root) == "7");
}

TEST_CASE("budgets stop divergent searches") {
  auto p = load_shared("loop = loop\nnats = 0 : nats\n");
  SolveOptions dfs;
  dfs.limit = 200;
  auto r = solve(p, "loop", dfs);
  CHECK(r.answers.empty());
  CHECK(r.budget_exhausted);
  SolveOptions bfs;
  bfs.strategy = Strategy::Bfs;
  bfs.limit = 200;
  CHECK(solve(p, "loop", bfs).budget_exhausted);
}

TEST_CASE("step kinds have stable names") {
  for (auto k : {StepKind::FunctionUnfold, StepKind::CaseSelect, StepKind::CaseNarrow, StepKind::OrSplit,
                 StepKind::ConstraintSolve, StepKind::ApplySaturate, StepKind::Suspend, StepKind::Wake})
    CHECK(parse_step_kind(to_string(k)) == k);
  CHECK(to_string(StepKind::FunctionUnfold) == "function-unfold");
  CHECK(to_string(StepKind::CaseNarrow) == "case-narrow");
  CHECK_FALSE(parse_step_kind("teleport").has_value());
  CHECK(to_string(Outcome::Floundered) == "floundered");
}

TEST_CASE("property: deterministic corpus agrees with big-step reduction") {
  REQUIRE(deterministic_corpus().size() >= 20);
  for (const auto& e : deterministic_corpus()) {
    CAPTURE(e.name);
    auto p = load_shared(e.source);
    MachineState s = inject(p, e.goal);
    std::size_t n = 0;
    while (is_terminal(s) == Outcome::Running) {
      auto succ = step(s);
      REQUIRE(succ.size() <= 1);
      REQUIRE(succ.size() == 1);
      s = succ[0].state;
      REQUIRE(++n < 100000);
    }
    auto oracle = big_step_text(*p, e.goal);
    auto r = solve(p, e.goal);
    if (oracle) {
      REQUIRE(r.answers.size() == 1);
      CHECK(r.answers[0].text() == *oracle);
    } else {
      CHECK(r.answers.empty());
    }
  }
}

TEST_CASE("property: narrowing answers are sound") {
  // Each answer, substituted into the goal, reduces to Success.
  struct Case {
    std::string source, pattern;
    std::vector<std::string> vars;
  };
  std::vector<Case> cases{
      {kConcSource, "conc {ys} [{x}] =:= [1,2,3]", {"x", "ys"}},
      {kConcSource, "conc {xs} {ys} =:= [1,2,3]", {"xs", "ys"}},
      {kConcSource, "conc {xs} [3] =:= conc [1] {ys} &> {ys} =:= [2,3]", {"xs", "ys"}},
      {kNatSource, "add {x} {y} =:= Succ (Succ (Succ Z))", {"x", "y"}},
      {kNatSource, "add {x} (Succ Z) =:= Succ (Succ Z)", {"x"}},
  };
  for (const auto& c : cases) {
    auto p = load_shared(c.source);
    std::map<std::string, std::string> names;
    for (const auto& v : c.vars) names[v] = v;
    std::string free_goal = fill(c.pattern, names) + " where ";
    for (std::size_t i = 0; i < c.vars.size(); ++i) free_goal += (i ? ", " : "") + c.vars[i];
    free_goal += " free";
    CAPTURE(free_goal);
    SolveOptions bfs;
    bfs.strategy = Strategy::Bfs;
    // The third goal has an infinite search space; soundness needs only
    // the answers found within the bound.
    bfs.limit = 20000;
    auto r = solve(p, free_goal, bfs);
    CHECK_FALSE(r.answers.empty());
    for (const auto& a : r.answers) {
      std::map<std::string, std::string> values(a.bindings.begin(), a.bindings.end());
      std::string ground = fill(c.pattern, values);
      CAPTURE(ground);
      CHECK(big_step_text(*p, ground) == std::optional<std::string>("Success"));
    }
  }
}

TEST_CASE("property: breadth-first narrowing finds exactly the generate-and-test solutions") {
  auto p = load_shared(kConcSource);
  auto lists = lists_upto({1, 2, 3}, 3);
  std::set<std::string> expected;
  for (const auto& xs : lists)
    for (const auto& ys : lists) {
      std::string goal = "conc " + list_text(xs) + " " + list_text(ys) + " =:= [1,2,3]";
      if (big_step_text(*p, goal) == std::optional<std::string>("Success"))
        expected.insert("{xs = " + list_text(xs) + ", ys = " + list_text(ys) + "} Success");
    }
  SolveOptions bfs;
  bfs.strategy = Strategy::Bfs;
  auto r = solve(p, "conc xs ys =:= [1,2,3] where xs, ys free", bfs);
  auto got = answer_texts(r);
  CHECK(std::set<std::string>(got.begin(), got.end()) == expected);
  CHECK(got.size() == expected.size());
  CHECK(expected.size() == 4);

  auto nat = load_shared(kNatSource);
  std::set<std::string> nat_expected;
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; b <= 4; ++b) {
      std::string goal = "add " + numeral(a) + " " + numeral(b) + " =:= Succ (Succ (Succ Z))";
      if (big_step_text(*nat, goal) == std::optional<std::string>("Success")) {
        auto plain = [](int n) {
          std::string s = numeral(n);
          return n == 0 ? s : s.substr(1, s.size() - 2);
        };
        nat_expected.insert("{x = " + plain(a) + ", y = " + plain(b) + "} Success");
      }
    }
  auto nat_got = answer_texts(solve(nat, "add x y =:= Succ (Succ (Succ Z)) where x, y free", bfs));
  CHECK(std::set<std::string>(nat_got.begin(), nat_got.end()) == nat_expected);
  CHECK(nat_got.size() == 4);
}

TEST_CASE("property: machine invariants hold along random walks") {
  auto conc = load_shared(kConcSource);
  random_walks(conc, "conc ys [x] =:= [1,2,3] where x, ys free", 40, 200);
  random_walks(conc, "conc xs ys =:= [1,2] &> conc ys xs =:= zs where xs, ys, zs free", 40, 200);
  auto res = load_shared(kResiduationSource);
  random_walks(res, "isZero x & x =:= 0 where x free", 20, 100);
  random_walks(res, "isZero x & isZero y & y =:= x & x =:= coin where x, y free", 40, 200);
  random_walks(res, "x =:= coin & isZero x where x free", 20, 100);
  auto nat = load_shared(kNatSource);
  random_walks(nat, "add x y =:= Succ (Succ Z) where x, y free", 40, 200);
}

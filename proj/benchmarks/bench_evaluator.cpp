#include <benchmark/benchmark.h>

#include <memory>

#include "flw/frontend.hpp"
#include "flw/machine.hpp"
#include "flw/solve.hpp"
#include "flw/trace.hpp"
#include "programs.hpp"

using namespace flw;

namespace {

std::shared_ptr<const Program> program(const char* src) {
  return std::make_shared<const Program>(load_program(src, Lang::Mcy, "main"));
}

void BM_SolveQsort(benchmark::State& state) {
  auto p = program(bench::kQsort);
  std::string goal = "qsort " + bench::shuffled_list(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve(p, goal));
}
BENCHMARK(BM_SolveQsort)->Arg(8)->Arg(32)->Arg(128);

void BM_NarrowLast(benchmark::State& state) {
  auto p = program(bench::kConc);
  std::string goal = "last " + bench::int_list(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(solve(p, goal));
}
BENCHMARK(BM_NarrowLast)->Arg(4)->Arg(16)->Arg(64);

// One step on a large heap; measures the cost of persistence.
void BM_StepLargeHeap(benchmark::State& state) {
  auto p = program(bench::kConc);
  MachineState s = inject(p, "conc " + bench::int_list(static_cast<int>(state.range(0))) + " []");
  for (auto _ : state) benchmark::DoNotOptimize(step(s));
}
BENCHMARK(BM_StepLargeHeap)->RangeMultiplier(8)->Range(8, 4096);

void BM_TraceRunAndRewind(benchmark::State& state) {
  auto p = program(bench::kConc);
  for (auto _ : state) {
    TraceSession t(p, "last " + bench::int_list(8));
    t.run_to(RunPolicy::terminal());
    while (t.cursor() != 0) t.backward();
    benchmark::DoNotOptimize(t.render());
  }
}
BENCHMARK(BM_TraceRunAndRewind);

}  // namespace

BENCHMARK_MAIN();

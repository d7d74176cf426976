#include <benchmark/benchmark.h>

#include "flw/frontend.hpp"
#include "flw/ir_json.hpp"
#include "programs.hpp"

using namespace flw;

namespace {

void BM_LoadSurface(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(load_program(bench::kQsort, Lang::Mcy, "qsort"));
}
BENCHMARK(BM_LoadSurface);

void BM_LoadProlog(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(load_program(bench::kApp, Lang::Prolog, "app"));
}
BENCHMARK(BM_LoadProlog);

// A module of n independent list functions.
void BM_LoadManyFunctions(benchmark::State& state) {
  std::string src;
  for (int i = 0; i < state.range(0); ++i) {
    std::string f = "f" + std::to_string(i);
    src += f + " [] ys = ys\n" + f + " (x:xs) ys = x : " + f + " xs ys\n\n";
  }
  for (auto _ : state) benchmark::DoNotOptimize(load_program(src, Lang::Mcy, "many"));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LoadManyFunctions)->RangeMultiplier(4)->Range(4, 256)->Complexity();

void BM_IrRoundTrip(benchmark::State& state) {
  Program p = load_program(bench::kQsort, Lang::Mcy, "qsort");
  for (auto _ : state) benchmark::DoNotOptimize(parse_ir(serialize_ir(p)));
}
BENCHMARK(BM_IrRoundTrip);

}  // namespace

BENCHMARK_MAIN();

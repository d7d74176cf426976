#include <benchmark/benchmark.h>

#include "flw/analysis.hpp"
#include "flw/frontend.hpp"
#include "flw/ir_json.hpp"
#include "programs.hpp"

using namespace flw;

namespace {

void BM_AnalyzeAllCold(benchmark::State& state) {
  Program p = load_program(bench::kQsort, Lang::Mcy, "qsort");
  auto reg = default_registry();
  for (auto _ : state) {
    AnalysisCache cache;
    for (const auto& name : reg.names()) benchmark::DoNotOptimize(analyze_all(cache, reg, p, name));
  }
}
BENCHMARK(BM_AnalyzeAllCold);

void BM_AnalyzeWarm(benchmark::State& state) {
  Program p = load_program(bench::kQsort, Lang::Mcy, "qsort");
  auto reg = default_registry();
  AnalysisCache cache;
  const auto version = content_hash(p);
  analyze(cache, reg, p, version, "Completeness", "qsort");
  for (auto _ : state) benchmark::DoNotOptimize(analyze(cache, reg, p, version, "Completeness", "qsort"));
}
BENCHMARK(BM_AnalyzeWarm);

void BM_ContentHash(benchmark::State& state) {
  Program p = load_program(bench::kQsort, Lang::Mcy, "qsort");
  for (auto _ : state) benchmark::DoNotOptimize(content_hash(p));
}
BENCHMARK(BM_ContentHash);

// Call chain f0 -> f1 -> ... -> fn.
void BM_DependencyChain(benchmark::State& state) {
  std::string src;
  const auto n = state.range(0);
  for (int i = 0; i < n; ++i)
    src += "f" + std::to_string(i) + " x = " + (i + 1 < n ? "f" + std::to_string(i + 1) + " x" : "x") + "\n";
  Program p = load_program(src, Lang::Mcy, "chain");
  for (auto _ : state) benchmark::DoNotOptimize(dep_graph(p, "f0"));
  state.SetComplexityN(n);
}
BENCHMARK(BM_DependencyChain)->RangeMultiplier(4)->Range(8, 512)->Complexity();

}  // namespace

BENCHMARK_MAIN();

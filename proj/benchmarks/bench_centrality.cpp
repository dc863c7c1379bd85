#include <benchmark/benchmark.h>

#include "hymn/analysis.hpp"
#include "hymn/centrality.hpp"
#include "hymn/generators.hpp"

using namespace hymn;

static void BM_Cse(benchmark::State& state) {
  const Graph g = gen_rg_deleted(static_cast<int>(state.range(0)), 5, 1);
  const int K = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(cse(g, K).values.data());
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Cse)->ArgsProduct({{30, 60, 120, 240}, {12, 20}})->Complexity();

static void BM_Katz(benchmark::State& state) {
  const Graph g = gen_erdos_renyi(static_cast<int>(state.range(0)), 0.1, 2);
  for (auto _ : state) benchmark::DoNotOptimize(katz_default(g).scores.data());
}
BENCHMARK(BM_Katz)->Arg(50)->Arg(200);

static void BM_Betweenness(benchmark::State& state) {
  const Graph g = gen_erdos_renyi(static_cast<int>(state.range(0)), 8.0 / static_cast<double>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(classical_centrality(g, Measure::betweenness).scores.data());
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Betweenness)->RangeMultiplier(2)->Range(64, 1024)->Complexity();

// Brute-force motif counts; four_cycle dominates.
static void BM_CountSubstructure(benchmark::State& state) {
  const Graph g = gen_rg_deleted(60, 5, 4);
  const auto kind = static_cast<Substructure>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(count_substructure(g, kind));
  state.SetLabel(to_string(kind));
}
BENCHMARK(BM_CountSubstructure)->DenseRange(0, 5);
BENCHMARK_MAIN();

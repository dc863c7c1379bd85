#include <benchmark/benchmark.h>

#include "hymn/expressiveness.hpp"
#include "hymn/generators.hpp"

using namespace hymn;

static void BM_WlRefine(benchmark::State& state) {
  const Graph g = gen_random_regular(static_cast<int>(state.range(0)), 4, 5);
  for (auto _ : state) benchmark::DoNotOptimize(wl_refine(g).rounds);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_WlRefine)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

static void BM_MarkedBagSeparates(benchmark::State& state) {
  const auto [a, b] = counterexample_qt_pair();
  const int T = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(marked_bag_separates(a, b, Policy::sc_max(), T));
}
BENCHMARK(BM_MarkedBagSeparates)->Arg(1)->Arg(12);

static void BM_CounterexampleSuite(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(counterexample_suite().all_pass());
}
BENCHMARK(BM_CounterexampleSuite);

#include <benchmark/benchmark.h>

#include "hymn/generators.hpp"
#include "hymn/nn.hpp"
#include "hymn/rng.hpp"
#include "hymn/sampling.hpp"

using namespace hymn;

namespace {

// One training chunk: 16 RG(60,5)-minus-60-edges graphs with T marked copies each.
struct Chunk {
  nn::ModelConfig cfg;
  nn::ModelParams params;
  nn::PackedBatch batch;

  explicit Chunk(int T) {
    cfg.input_dim = nn::input_dim_for(0, 0, cfg);
    params = nn::ModelParams::init(cfg, 1);
    std::vector<nn::PreparedGraph> prepared;
    for (int i = 0; i < 16; ++i) {
      prepared.push_back(nn::prepare(build_bag(gen_rg_deleted(60, 5, derive_seed(7, i)), Policy::sc_max(), T), nullptr, cfg));
    }
    std::vector<const nn::PreparedGraph*> ptrs;
    for (const auto& p : prepared) ptrs.push_back(&p);
    batch = nn::pack(ptrs);
    nn::calibrate_scale(params, batch, cfg);
  }
};

}  // namespace

static void BM_Forward(benchmark::State& state) {
  const Chunk c(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(nn::forward(c.batch, c.params, c.cfg).outputs.data());
  state.counters["rows"] = c.batch.num_rows();
}
BENCHMARK(BM_Forward)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_ForwardBackward(benchmark::State& state) {
  const Chunk c(static_cast<int>(state.range(0)));
  const RowMatrix up = RowMatrix::Ones(16, 1);
  for (auto _ : state) {
    const auto fwd = nn::forward(c.batch, c.params, c.cfg);
    benchmark::DoNotOptimize(nn::backward(fwd.cache, up, c.params, c.cfg).layers.data());
  }
}
BENCHMARK(BM_ForwardBackward)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_AdamStep(benchmark::State& state) {
  nn::ModelConfig cfg;
  auto params = nn::ModelParams::init(cfg, 2);
  const auto grads = nn::ModelParams::init(cfg, 3);
  auto adam = nn::AdamState::zeros_like(params);
  for (auto _ : state) nn::adam_step(params, grads, adam, {});
}
BENCHMARK(BM_AdamStep);

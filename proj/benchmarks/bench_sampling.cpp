#include <benchmark/benchmark.h>

#include "aitlab/rng.hpp"
#include "aitlab/stochastic_models.hpp"

using namespace aitlab;

static void BM_BrownianPair(benchmark::State& state) {
  const TimeGrid grid(1.0, static_cast<int>(state.range(0)));
  PathBundle b(grid);
  std::uint64_t i = 0;
  for (auto _ : state) {
    sample_brownian_pair(1, i++, true, b);
    benchmark::DoNotOptimize(b.b_terminal);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BrownianPair)->Arg(100)->Arg(1000);

static void BM_CirStep(benchmark::State& state) {
  const CIRParams p{2.0, 0.04, 0.2, 0.04};
  Stream s(1, 0, StreamTag::variance);
  double z = p.z0;
  for (auto _ : state) {
    z = cir_step(p, z, 1e-3, s);
    benchmark::DoNotOptimize(z);
  }
}
BENCHMARK(BM_CirStep);

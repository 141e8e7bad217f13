#include <benchmark/benchmark.h>

#include "aitlab/forward_mc.hpp"
#include "aitlab/temporal_value.hpp"

using namespace aitlab;

static void BM_DeltaVBsm(benchmark::State& state) {
  const BlackScholesModel m{Curve::constant(0.08), Curve::constant(0.02), Curve::constant(0.2)};
  const TimeGrid grid(1.0, 1000);
  SimulationOptions o;
  o.n_paths = state.range(0);
  o.workers = 1;
  for (auto _ : state) benchmark::DoNotOptimize(mc_delta_v(m, DelaySpec{0.5, 0.0}, grid, o).mean);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DeltaVBsm)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_TemporalValue(benchmark::State& state) {
  const TimeGrid grid(1.0, 1000);
  const Curve sigma = Curve::constant(0.2);
  for (auto _ : state) benchmark::DoNotOptimize(temporal_value(1.0, 1.0, 1.0, sigma, grid).d_star);
}
BENCHMARK(BM_TemporalValue)->Unit(benchmark::kMillisecond);

#include <benchmark/benchmark.h>

#include "drm/metrics.hpp"
#include "drm/montecarlo.hpp"
#include "drm/operator.hpp"
#include "drm/random_measures.hpp"

using namespace drm;

static void BM_ApplyT(benchmark::State& state) {
  const GridSpec grid(40.0, static_cast<std::size_t>(state.range(0)));
  const auto p = random_measure(1, 0, 1.0, grid);
  for (auto _ : state) benchmark::DoNotOptimize(apply_T(p));
}
BENCHMARK(BM_ApplyT)->Arg(1024)->Arg(4096)->Arg(16384)->Unit(benchmark::kMillisecond);

static void BM_DAlpha(benchmark::State& state) {
  const GridSpec grid(40.0, static_cast<std::size_t>(state.range(0)));
  const auto [p, q] = random_pair(1, 0, 1.0, grid);
  const auto cfg = MetricConfig::make(1.5);
  for (auto _ : state) benchmark::DoNotOptimize(d_alpha(p, q, cfg));
}
BENCHMARK(BM_DAlpha)->Arg(16384)->Unit(benchmark::kMillisecond);

static void BM_PopulationStep(benchmark::State& state) {
  auto pop = make_population(200000, 1.0, InitialCondition::kEqual, Model::kDrm, 42);
  const auto execution = state.range(0) == 0 ? Execution::kSequential : Execution::kParallel;
  for (auto _ : state) pop.step(execution);
  state.SetItemsProcessed(state.iterations() * 200000);
}
BENCHMARK(BM_PopulationStep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();

#include "gpprec/hierarchy.hpp"
#include "gpprec/matching.hpp"
#include "gpprec/truth.hpp"

#include <benchmark/benchmark.h>

using namespace gpprec;

static void BM_MeasureCloud(benchmark::State& state) {
  const Matrix s = perturbed_grid_sites(state.range(0), 2, 4 * (state.range(0) + 1) - 1, 0.5, 1);
  for (auto _ : state) benchmark::DoNotOptimize(measure_cloud(s));
}
BENCHMARK(BM_MeasureCloud)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_EmbedCloud(benchmark::State& state) {
  const Index per_axis = state.range(0);
  const SiteCloud c = measure_cloud(perturbed_grid_sites(per_axis, 2, 4 * (per_axis + 1) - 1, 0.5, 1));
  for (auto _ : state) benchmark::DoNotOptimize(embed_cloud(c, ScatterConfig{}));
  state.SetComplexityN(c.size());
}
BENCHMARK(BM_EmbedCloud)->Arg(5)->Arg(10)->Arg(20)->Complexity()->Unit(benchmark::kMillisecond);

static void BM_MaximinOrder(benchmark::State& state) {
  const Matrix s = perturbed_grid_sites(state.range(0), 2, 4 * (state.range(0) + 1) - 1, 0.5, 1);
  for (auto _ : state) benchmark::DoNotOptimize(maximin_order(s));
}
BENCHMARK(BM_MaximinOrder)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond);

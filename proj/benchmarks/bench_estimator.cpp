#include "gpprec/cholesky_factor.hpp"
#include "gpprec/estimator.hpp"
#include "gpprec/hierarchy.hpp"
#include "gpprec/truth.hpp"

#include <benchmark/benchmark.h>

using namespace gpprec;

static void BM_EstimatePrecision1d(benchmark::State& state) {
  const Index p = state.range(0);
  const GroundTruth t = build_lattice_precision(p, 1, 1);
  const SampleMatrix z = sample(t, 2000, 1);
  EstimatorConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_precision(z, LatticeShape(p, 1), cfg));
  state.SetComplexityN(p);
}
BENCHMARK(BM_EstimatePrecision1d)->RangeMultiplier(2)->Range(40, 640)->Complexity()->Unit(benchmark::kMillisecond);

static void BM_EstimatePrecision2d(benchmark::State& state) {
  const Index p = state.range(0);
  const GroundTruth t = build_lattice_precision(p, 2, 2);
  const SampleMatrix z = sample(t, 2000, 1);
  EstimatorConfig cfg;
  cfg.fallback_enabled = false;
  cfg.b_override = 3;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_precision(z, LatticeShape(p, 2), cfg));
}
BENCHMARK(BM_EstimatePrecision2d)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

static void BM_FullInverse(benchmark::State& state) {
  const Index p = state.range(0);
  const GroundTruth t = build_lattice_precision(p, 1, 1);
  const SampleMatrix z = sample(t, 2000, 1);
  for (auto _ : state) benchmark::DoNotOptimize(spd_inverse(sample_covariance(z)));
}
BENCHMARK(BM_FullInverse)->RangeMultiplier(2)->Range(40, 640)->Unit(benchmark::kMillisecond);

static void BM_ExactBlockFactor(benchmark::State& state) {
  const int q = static_cast<int>(state.range(0));
  const Index p = (Index{1} << q) - 1;
  const GroundTruth t = build_lattice_precision(p, 1, 2);
  const MaximinOrdering o = maximin_order(t.coordinates());
  const LevelPartition lv = assign_levels(o);
  Matrix om(p, p);
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < p; ++j) om(i, j) = t.omega.matrix()(o.perm[i], o.perm[j]);
  const DenseSymMatrix omega(om);
  for (auto _ : state) benchmark::DoNotOptimize(exact_block_factor(omega, lv, 1));
}
BENCHMARK(BM_ExactBlockFactor)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

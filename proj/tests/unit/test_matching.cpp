#include "gpprec/errors.hpp"
#include "gpprec/matching.hpp"
#include "gpprec/random.hpp"
#include "gpprec/truth.hpp"

#include "../oracles/combinatorial_oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace gpprec;

namespace {

Matrix column(std::initializer_list<double> xs) {
  Matrix m(static_cast<Index>(xs.size()), 1);
  Index i = 0;
  for (double x : xs) m(i++, 0) = x;
  return m;
}

}  // namespace

TEST(MeasureCloud, SingleMidpoint) {
  const SiteCloud c = measure_cloud(column({0.5}));
  EXPECT_DOUBLE_EQ(c.h, 0.5);
  EXPECT_DOUBLE_EQ(c.delta, 1.0);
}

TEST(MeasureCloud, RegularGrid) {
  for (Index p : {3, 7, 15}) {
    Matrix s(p, 1);
    for (Index t = 0; t < p; ++t) s(t, 0) = static_cast<double>(t + 1) / static_cast<double>(p + 1);
    const SiteCloud c = measure_cloud(s);
    // Farthest evaluation point is a box corner, one spacing away.
    EXPECT_NEAR(c.h, 1.0 / static_cast<double>(p + 1), 1e-12);
    EXPECT_NEAR(c.delta, 1.0, 1e-9);
  }
}

TEST(MeasureCloud, ClusteredCornerIsFlagged) {
  const SiteCloud c = measure_cloud(column({0.01, 0.02, 0.03}));
  EXPECT_LT(c.delta, kLowHomogeneity);
  EXPECT_GT(c.h, 0.9);
}

TEST(MeasureCloud, RejectsBadSites) {
  EXPECT_THROW(measure_cloud(column({0.0})), InvalidInput);
  EXPECT_THROW(measure_cloud(column({0.3, 0.3})), InvalidInput);
  EXPECT_THROW(measure_cloud(Matrix(0, 1)), InvalidInput);
  EXPECT_THROW(measure_cloud(Matrix::Constant(1, 4, 0.5)), InvalidInput);
}

TEST(MeasureCloud, RoundTrip) {
  const SiteCloud c = measure_cloud(perturbed_grid_sites(4, 2, 31, 0.5, 7));
  std::stringstream ss;
  write_cloud(ss, c);
  const SiteCloud back = read_cloud(ss);
  EXPECT_TRUE(back.sites == c.sites);
  EXPECT_EQ(back.h, c.h);
  EXPECT_EQ(back.delta, c.delta);
}

TEST(TargetLattice, SideFromFillDistance) {
  SiteCloud c;
  c.d = 1;
  c.sites = column({0.5});
  c.h = 0.1;
  TargetLattice t = build_target_lattice(c, 0.5);
  EXPECT_EQ(t.shape.p(), 20);
  EXPECT_NEAR(t.points(1, 0) - t.points(0, 0), 1.0 / 21.0, 1e-15);
  c.h = 0.25;
  EXPECT_EQ(build_target_lattice(c, 1.0).shape.p(), 4);
  c.h = 0.2;  // 1/(0.5*0.2) = 10 up to rounding
  EXPECT_EQ(build_target_lattice(c, 0.5).shape.p(), 10);
  c.h = 1e-4;
  EXPECT_THROW(build_target_lattice(c, 0.5), CapacityExceeded);
  EXPECT_THROW(build_target_lattice(c, 0.0), InvalidInput);
}

TEST(PerfectMatching, SitesOnLattice) {
  const TargetLattice lat = lattice_points(LatticeShape(5, 2));
  const std::vector<Index> chosen{3, 7, 11, 20, 24};
  Matrix s(5, 2);
  for (Index i = 0; i < 5; ++i) s.row(i) = lat.points.row(chosen[static_cast<std::size_t>(i)]);
  const LatticeEmbedding e = perfect_matching(measure_cloud(s), lat, 0.0);
  EXPECT_EQ(e.displacement, 0.0);
  for (Index i = 0; i < 5; ++i) EXPECT_EQ(e.vertex_of[static_cast<std::size_t>(i)], chosen[static_cast<std::size_t>(i)]);
  EXPECT_EQ(e.matched, chosen);
}

TEST(PerfectMatching, SmallExample) {
  TargetLattice lat;
  lat.shape = LatticeShape(3, 1);
  lat.points = column({0.25, 0.5, 0.75});
  const LatticeEmbedding e = perfect_matching(measure_cloud(column({0.3, 0.6})), lat, 0.2);
  EXPECT_EQ(e.vertex_of[0], 0);
  EXPECT_TRUE(e.vertex_of[1] == 1 || e.vertex_of[1] == 2);
  EXPECT_LE(e.displacement, 0.15 + 1e-15);
  for (std::size_t a = 0; a < e.matched.size(); ++a) EXPECT_EQ(e.vertex_of[static_cast<std::size_t>(e.site_of[a])], e.matched[a]);
}

TEST(PerfectMatching, HallWitness) {
  TargetLattice lat;
  lat.shape = LatticeShape(3, 1);
  lat.points = column({0.25, 0.5, 0.75});
  try {
    perfect_matching(measure_cloud(column({0.48, 0.52})), lat, 0.05);
    FAIL() << "expected NoMatching";
  } catch (const NoMatching& e) {
    EXPECT_EQ(e.hall_set().size(), 2u);
    EXPECT_EQ(e.neighborhood(), (std::vector<std::size_t>{1}));
  }
}

TEST(MaximumMatching, AgreesWithHallDeficiency) {
  CounterRng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 1 + static_cast<int>(rng.below(9));
    const Index right = 1 + static_cast<Index>(rng.below(9));
    std::vector<std::vector<Index>> adj(static_cast<std::size_t>(m));
    std::vector<std::vector<long>> ref(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
      for (Index r = 0; r < right; ++r)
        if (rng.uniform() < 0.3) {
          adj[static_cast<std::size_t>(i)].push_back(r);
          ref[static_cast<std::size_t>(i)].push_back(static_cast<long>(r));
        }
    EXPECT_EQ(maximum_matching_size(adj, right), oracle::brute_max_matching(ref)) << "trial " << trial;
  }
}

TEST(PerfectMatching, WitnessViolatesHall) {
  CounterRng rng(5);
  int failures = 0;
  for (int trial = 0; trial < 60; ++trial) {
    Matrix s(6, 1);
    for (Index i = 0; i < 6; ++i) s(i, 0) = 0.05 + 0.9 * rng.uniform();
    const TargetLattice lat = lattice_points(LatticeShape(8, 1));
    try {
      perfect_matching(measure_cloud(s), lat, 0.06);
    } catch (const NoMatching& e) {
      ++failures;
      EXPECT_GT(e.hall_set().size(), e.neighborhood().size());
      for (std::size_t i : e.hall_set())
        for (Index t = 0; t < 8; ++t)
          if (std::abs(s(static_cast<Index>(i), 0) - lat.points(t, 0)) <= 0.06)
            EXPECT_TRUE(std::count(e.neighborhood().begin(), e.neighborhood().end(), static_cast<std::size_t>(t)));
    }
  }
  EXPECT_GT(failures, 0);
}

TEST(EmbedCloud, PerturbedGridMatchesWithinRadius) {
  for (int d = 1; d <= 2; ++d) {
    const SiteCloud c = measure_cloud(perturbed_grid_sites(d == 1 ? 30 : 6, d, d == 1 ? 127 : 31, 0.3, 2));
    double c1 = 0.0;
    const auto [lat, emb] = embed_cloud(c, ScatterConfig{}, &c1);
    EXPECT_LE(emb.displacement, c.h * (1.0 + 1e-12));
    EXPECT_EQ(emb.matched.size(), static_cast<std::size_t>(c.size()));
    EXPECT_GT(c1, 0.0);
  }
}

TEST(PaddedPrecision, MovesTruthAndPadsIdentity) {
  LatticeEmbedding e;
  e.p = 4;
  e.matched = {1, 3};
  e.site_of = {1, 0};
  e.vertex_of = {3, 1};
  Matrix w(2, 2);
  w << 2, 0.5, 0.5, 3;
  const Matrix pad = padded_precision(DenseSymMatrix(w), e, LatticeShape(4, 1)).matrix();
  EXPECT_EQ(pad(1, 1), 3.0);
  EXPECT_EQ(pad(3, 3), 2.0);
  EXPECT_EQ(pad(1, 3), 0.5);
  EXPECT_EQ(pad(0, 0), 1.0);
  EXPECT_EQ(pad(2, 2), 1.0);
  EXPECT_EQ(pad(0, 1), 0.0);
}

TEST(EmbedAndEstimate, SingleSiteIsReciprocalVariance) {
  const SiteCloud c = measure_cloud(column({0.5}));
  Matrix z = standard_normal(200, 1, 4) * 2.0;
  const ScatteredEstimate est = embed_and_estimate(SampleMatrix(z), c, EstimatorConfig{}, 9);
  // The padded noise columns only enter through chance correlations.
  const double scalar = 200.0 / z.squaredNorm();
  EXPECT_NEAR(est.omega.matrix()(0, 0), scalar, 0.05 * scalar);
  EXPECT_EQ(est.omega.dim(), 1);
}

TEST(EmbedAndEstimate, IdentityTruthOnLatticeSites) {
  const TargetLattice lat = lattice_points(LatticeShape(12, 1));
  const SiteCloud c = measure_cloud(lat.points);
  const SampleMatrix z(standard_normal(3000, 12, 6));
  const ScatteredEstimate est = embed_and_estimate(z, c, EstimatorConfig{}, 1);
  EXPECT_LE(relative_spectral_error(est.omega.matrix(), Matrix::Identity(12, 12)), 0.3);
  EXPECT_TRUE(est.omega.matrix() == est.omega.matrix().transpose());
}

TEST(EmbedAndEstimate, Deterministic) {
  const SiteCloud c = measure_cloud(perturbed_grid_sites(20, 1, 127, 0.3, 3));
  const GroundTruth t = build_green_restriction(127, 1, 1, c);
  const SampleMatrix z = sample(t, 500, 2);
  const auto a = embed_and_estimate(z, c, EstimatorConfig{}, 5);
  const auto b = embed_and_estimate(z, c, EstimatorConfig{}, 5);
  EXPECT_TRUE(a.omega.matrix() == b.omega.matrix());
}

TEST(EmbedAndEstimate, PopulationInputRecoversTruth) {
  const SiteCloud c = measure_cloud(perturbed_grid_sites(20, 1, 127, 0.3, 3));
  const GroundTruth t = build_green_restriction(127, 1, 1, c);
  EstimatorConfig cfg;
  cfg.b_override = 8;
  const auto est = embed_and_estimate(CovarianceSource::from_population(t.sigma), c, cfg, 0);
  EXPECT_LE(relative_spectral_error(est.omega.matrix(), t.omega.matrix()), 1e-3);
}

TEST(EmbedAndEstimate, ComparableToLatticeRun) {
  const SiteCloud c = measure_cloud(perturbed_grid_sites(30, 1, 123, 0.3, 1));
  const GroundTruth scattered = build_green_restriction(123, 1, 1, c);
  const GroundTruth lattice = build_lattice_precision(30, 1, 1);
  const double es = relative_spectral_error(
      embed_and_estimate(sample(scattered, 4000, 1), c, EstimatorConfig{}, 1).omega.matrix(), scattered.omega.matrix());
  const double el = relative_spectral_error(
      estimate_precision(sample(lattice, 4000, 1), LatticeShape(30, 1),
                         EstimatorConfig{}).matrix.matrix(),
      lattice.omega.matrix());
  EXPECT_LE(es, 3.0 * el);
  EXPECT_GE(es, el / 3.0);
}

#pragma once

#include "gpprec/estimator.hpp"
#include "gpprec/lattice.hpp"
#include "gpprec/linalg.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace gpprec {

/// Observation sites in (0,1)^d, one per row, with measured fill distance h
/// and homogeneity delta.
struct SiteCloud {
  int d = 1;
  Matrix sites;
  double h = 0.0;
  double delta = 0.0;

  Index size() const noexcept { return sites.rows(); }
};

/// h is the largest distance from an evaluation-grid point of [0,1]^d to the
/// nearest site; the grid has about 64*M points, boundary included.
/// delta = min(min pairwise distance, min boundary clearance) / h, capped at 1.
SiteCloud measure_cloud(const Matrix& sites);

/// Homogeneous clouds have delta near 1; below this they are flagged.
inline constexpr double kLowHomogeneity = 0.1;

void write_cloud(std::ostream& out, const SiteCloud& cloud);
/// Reads "d M" then M rows and re-measures the cloud.
SiteCloud read_cloud(std::istream& in);

/// Lattice sites y_t = (t + 1) / (p + 1), zero-based t, one row per vertex.
struct TargetLattice {
  LatticeShape shape;
  Matrix points;
};

/// p = ceil(1 / (c1 h)); CapacityExceeded when p^d > cap.
TargetLattice build_target_lattice(const SiteCloud& cloud, double c1, Index cap = kMaxVertices);
TargetLattice lattice_points(const LatticeShape& shape);

struct LatticeEmbedding {
  Index p = 0;
  /// The matched vertex set A, sorted.
  std::vector<Index> matched;
  /// site_of[a] is the site matched to matched[a].
  std::vector<Index> site_of;
  /// vertex_of[i] is the lattice vertex holding site i.
  std::vector<Index> vertex_of;
  double displacement = 0.0;
};

/// Maximum matching of sites to lattice points within `radius`
/// (Hopcroft-Karp). Throws NoMatching with a Hall-violating site set when
/// some site stays unmatched.
LatticeEmbedding perfect_matching(const SiteCloud& cloud, const TargetLattice& lattice, double radius);

/// Size of a maximum matching, without requiring it to be site-perfect.
Index maximum_matching_size(const std::vector<std::vector<Index>>& adjacency, Index right_size);

struct ScatterConfig {
  double c1 = 0.5;
  int max_retries = 3;
  Index capacity = kMaxVertices;
};

struct ScatteredEstimate {
  /// Estimate over the original site order.
  DenseSymMatrix omega;
  LatticeEmbedding embedding;
  LatticeShape shape;
  double c1_used = 0.0;
  Index b = 0;
  EstimatePath path = EstimatePath::blockwise;
  std::uint64_t seed = 0;
};

/// Padded precision: Omega (over sites) moved onto A, identity on the rest.
DenseSymMatrix padded_precision(const DenseSymMatrix& omega, const LatticeEmbedding& embedding,
                                const LatticeShape& shape);

/// Lattice sizing and matching with up to max_retries halvings of c1.
std::pair<TargetLattice, LatticeEmbedding> embed_cloud(const SiteCloud& cloud, const ScatterConfig& scatter,
                                                       double* c1_used = nullptr);

/// Estimate at scattered sites through the lattice estimator. Samples are
/// padded with seeded standard normals off A; a population source is padded
/// with the identity.
ScatteredEstimate embed_and_estimate(const CovarianceSource& source, const SiteCloud& cloud,
                                     const EstimatorConfig& config, std::uint64_t seed,
                                     const ScatterConfig& scatter = {});
ScatteredEstimate embed_and_estimate(const SampleMatrix& samples, const SiteCloud& cloud,
                                     const EstimatorConfig& config, std::uint64_t seed,
                                     const ScatterConfig& scatter = {});

}  // namespace gpprec

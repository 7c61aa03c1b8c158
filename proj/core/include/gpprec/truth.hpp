#pragma once

#include "gpprec/lattice.hpp"
#include "gpprec/linalg.hpp"
#include "gpprec/matching.hpp"
#include "gpprec/stats.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace gpprec {

enum class ModelTag { laplacian_power, green_restriction, matern };
const char* to_string(ModelTag tag) noexcept;

struct GroundTruth {
  DenseSymMatrix sigma;
  DenseSymMatrix omega;
  double kappa = 1.0;
  std::variant<LatticeShape, SiteCloud> geometry;
  ModelTag tag = ModelTag::laplacian_power;
  std::map<std::string, std::string> metadata;

  int d() const;
  Index size() const noexcept { return omega.dim(); }
  /// Mesh size: 1/(p+1) on a lattice, the fill distance on a cloud.
  double mesh() const;
  /// Site coordinates, one row per index.
  Matrix coordinates() const;
};

/// (2d+1)-point Dirichlet Laplacian on [p]^d scaled by (p+1)^2.
Matrix dirichlet_laplacian(Index p, int d);

/// Omega = h^d A^s, Sigma = Omega^{-1}, h = 1/(p+1).
GroundTruth build_lattice_precision(Index p, int d, int s, Index cap = kMaxVertices);

/// Sigma is the fine-lattice covariance (from build_lattice_precision on
/// [fine_m]^d) restricted to the sites, which must sit on fine nodes.
GroundTruth build_green_restriction(Index fine_m, int d, int s, const SiteCloud& cloud);

/// nu is 0.5, 1.5 or 2.5.
GroundTruth matern_covariance(const SiteCloud& cloud, double nu, double rho, double sigma2);

/// Z_n = L g_n with L the Cholesky factor of Sigma and g_n seeded normals.
SampleMatrix sample(const GroundTruth& truth, Index n, std::uint64_t seed);
SampleMatrix sample_gaussian(const DenseSymMatrix& sigma, Index n, std::uint64_t seed);

/// Roughly evenly spread sites on the fine nodes (t+1)/(fine_m+1): a regular
/// grid of per_axis^d points, each moved by up to `jitter` fine steps.
Matrix perturbed_grid_sites(Index per_axis, int d, Index fine_m, double jitter, std::uint64_t seed);

struct ScreeningProfile {
  /// Bin k holds pairs with floor(dist / mesh) == k.
  std::vector<Index> bins;
  /// Max |Omega_ij| / sqrt(Omega_ii Omega_jj) over each bin.
  std::vector<double> values;
  /// Fit of log(value) against bin over the leading bins that sit above the
  /// numerical floor; empty when fewer than two such bins exist.
  std::optional<LineFit> fit;
  std::size_t fitted_bins = 0;
};

/// Values at or below floor_factor * eps * kappa(Omega) count as numerical zeros.
ScreeningProfile screening_profile(const DenseSymMatrix& omega, const Matrix& coords, double mesh,
                                   double floor_factor = 100.0);
ScreeningProfile screening_profile(const GroundTruth& truth, double floor_factor = 100.0);

/// tail[k] = max_t sum_{|t'-t|_1 >= k} |omega(t,t')| / ||Omega||.
std::vector<double> l1_tail_profile(const DenseSymMatrix& omega, const LatticeShape& shape);

/// Metadata header ("# key=value" lines) followed by the matrix text.
void write_truth(std::ostream& out, const GroundTruth& truth, bool precision = true);

}  // namespace gpprec

#pragma once

#include "gpprec/estimator.hpp"
#include "gpprec/hierarchy.hpp"
#include "gpprec/linalg.hpp"
#include "gpprec/matching.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace gpprec {

/// Per-level quantities: omega on I^(k), B^(k) on J^(k), and the lower
/// Cholesky factor of B^(k)^{-1}.
struct ScaleEstimate {
  DenseSymMatrix omega;
  DenseSymMatrix b;
  LowerTriangular ltilde;
};

/// Index k - 1 holds level k.
using ScaleEstimates = std::vector<ScaleEstimate>;

/// Block lower-triangular storage of U^T, so U is block upper triangular.
/// Block (k, l) with l <= k has |J^(k)| rows and |J^(l)| cols.
class BlockTriangularFactor {
 public:
  BlockTriangularFactor() = default;
  BlockTriangularFactor(LevelPartition levels, int d);

  const LevelPartition& levels() const noexcept { return levels_; }
  int d() const noexcept { return d_; }

  void set_block(int k, int l, Matrix block);
  const Matrix& block(int k, int l) const;
  bool has_block(int k, int l) const { return blocks_.count({k, l}) != 0; }
  const std::map<std::pair<int, int>, Matrix>& blocks() const noexcept { return blocks_; }

  /// Dense U^T.
  Matrix transpose_dense() const;
  /// Dense U.
  Matrix upper() const { return transpose_dense().transpose(); }
  /// U U^T.
  Matrix reconstruct() const;

 private:
  LevelPartition levels_;
  int d_ = 1;
  std::map<std::pair<int, int>, Matrix> blocks_;
};

/// h^{-kd} omega_k restricted to J^(k).
DenseSymMatrix estimate_B(const DenseSymMatrix& omega_k, const LevelPartition& levels, int k, int d);

/// B^(k) and its factor from an estimate of omega on I^(k).
ScaleEstimate make_scale(const DenseSymMatrix& omega_k, const LevelPartition& levels, int k, int d);

/// Exact per-level quantities from Sigma = Omega^{-1}.
ScaleEstimates exact_scales(const DenseSymMatrix& omega, const LevelPartition& levels, int d);

BlockTriangularFactor assemble_U(const ScaleEstimates& scales, const LevelPartition& levels, int d);
/// Square-root variant: B^{-1/2} replaces Ltilde^T and B^{1/2} replaces Ltilde^{-1}.
BlockTriangularFactor assemble_U_star(const ScaleEstimates& scales, const LevelPartition& levels, int d);

BlockTriangularFactor exact_block_factor(const DenseSymMatrix& omega, const LevelPartition& levels, int d);
BlockTriangularFactor exact_block_factor_star(const DenseSymMatrix& omega, const LevelPartition& levels, int d);

enum class ScaleEstimator { scattered, full_inverse };

struct CholeskyConfig {
  EstimatorConfig estimator;
  ScatterConfig scatter;
  ScaleEstimator per_scale = ScaleEstimator::scattered;
  std::uint64_t seed = 0;
};

struct ScaleReport {
  EstimatePath path = EstimatePath::fallback_full_inverse;
  Index b = 0;
};

/// Estimates omega on every I^(k) from the same samples (columns in maximin
/// order). `sites` are in maximin order too; they are only read by the
/// scattered per-scale estimator. Failures are rethrown as ScaleFailure.
ScaleEstimates estimate_scales(const CovarianceSource& ordered, const Matrix& sites, const LevelPartition& levels,
                               int d, const CholeskyConfig& config, std::vector<ScaleReport>* report = nullptr);

BlockTriangularFactor estimate_cholesky(const SampleMatrix& ordered, const Matrix& sites,
                                        const LevelPartition& levels, int d, const CholeskyConfig& config);

/// "M q d", the level sizes, then every block as "k l rows cols" and its rows.
void write_factor(std::ostream& out, const BlockTriangularFactor& factor);
BlockTriangularFactor read_factor(std::istream& in);

}  // namespace gpprec

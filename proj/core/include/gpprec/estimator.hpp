#pragma once

#include "gpprec/lattice.hpp"
#include "gpprec/linalg.hpp"

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <utility>

namespace gpprec {

/// Either N observations or an exact covariance (the "N = infinity" mode,
/// which isolates the deterministic bias of the estimator).
class CovarianceSource {
 public:
  static CovarianceSource from_samples(SampleMatrix samples);
  static CovarianceSource from_population(DenseSymMatrix sigma);

  bool is_population() const noexcept { return !samples_; }
  Index dim() const noexcept;
  /// 0 in population mode.
  Index n_samples() const noexcept { return samples_ ? samples_->n_samples() : 0; }

  const SampleMatrix& samples() const;
  const DenseSymMatrix& population() const;

  /// Sample (or exact) covariance restricted to `idx`, in the given order.
  DenseSymMatrix restricted(std::span<const Index> idx) const;
  DenseSymMatrix full() const;

  /// Source over a subset of the coordinates.
  CovarianceSource columns(std::span<const Index> idx) const;

 private:
  std::shared_ptr<const SampleMatrix> samples_;
  std::shared_ptr<const DenseSymMatrix> sigma_;
};

struct EstimatorConfig {
  std::optional<Index> b_override;
  /// Stand-in for kappa(Omega) in the block-size rule; defaults to p^d.
  std::optional<double> kappa_hint;
  bool fallback_enabled = true;
  /// b = ceil(block_constant * ln(N kappa)). 1 is the plain rule.
  double block_constant = 1.0;
  unsigned threads = 1;

  /// Throws InvalidInput if the config is unusable on a lattice of side p.
  void validate(Index p) const;
};

enum class EstimatePath { blockwise, fallback_full_inverse };
const char* to_string(EstimatePath path) noexcept;

struct PrecisionEstimate {
  DenseSymMatrix matrix;
  BlockScheme scheme;
  EstimatePath path = EstimatePath::blockwise;
};

/// ceil(ln(N kappa)), floored at 1.
Index choose_block_size(Index n_samples, double kappa);
Index choose_block_size(Index n_samples, double kappa, double block_constant);

/// T_{jj'} = ((Sigma_hat on W_{j,2})^{-1}) restricted to B_j x B_j'.
Matrix local_estimate(const CovarianceSource& source, const BlockScheme& scheme, Index j, Index jp);
Matrix local_estimate(const SampleMatrix& samples, const BlockScheme& scheme, Index j, Index jp);

/// Keyed by (j, j') block ids.
using LocalBlocks = std::map<std::pair<Index, Index>, Matrix>;

/// Every in-band local estimate, computing one window inverse per block row.
LocalBlocks local_estimates(const CovarianceSource& source, const BlockScheme& scheme, unsigned threads = 1);

/// Omega_tilde from the band blocks (zero elsewhere); no symmetrization.
Matrix assemble_unsymmetrized(const LocalBlocks& locals, const BlockScheme& scheme);
PrecisionEstimate assemble_global(const LocalBlocks& locals, const BlockScheme& scheme);

PrecisionEstimate estimate_precision(const SampleMatrix& samples, const LatticeShape& shape,
                                     const EstimatorConfig& config);
/// Population sources need config.b_override and always run blockwise.
PrecisionEstimate estimate_precision(const CovarianceSource& source, const LatticeShape& shape,
                                     const EstimatorConfig& config);

/// Row i of the precision estimate obtained by regressing coordinate i on the
/// others: (N / |res|^2) on the diagonal, -N beta / |res|^2 elsewhere.
Vector ols_plugin_row(const SampleMatrix& samples, Index i);

}  // namespace gpprec

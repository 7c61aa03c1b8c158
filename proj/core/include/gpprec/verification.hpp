#pragma once

#include "gpprec/linalg.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace gpprec {

/// Random SPD matrix Q diag(lambda) Q^T with log-uniform eigenvalues in
/// [1, kappa], endpoints included.
DenseSymMatrix random_spd(Index dim, double kappa, std::uint64_t seed);

/// Random symmetric matrix with spectral norm `norm`.
DenseSymMatrix random_symmetric(Index dim, double norm, std::uint64_t seed);

/// One perturbation instance: B, B_hat = B + E with kappa(B) eps_B = kappa_eps.
struct PerturbationCase {
  double kappa = 0.0;
  double eps = 0.0;
  double inverse_error = 0.0;
  double inverse_bound = 0.0;
  double cholesky_error = 0.0;
  double cholesky_bound = 0.0;
  double sqrt_error = 0.0;
  double sqrt_bound = 0.0;

  bool holds() const noexcept {
    return inverse_error <= inverse_bound && cholesky_error <= cholesky_bound && sqrt_error <= sqrt_bound;
  }
};

PerturbationCase perturbation_case(Index dim, double kappa, double kappa_eps, std::uint64_t seed);
/// `count` cases of size dim with kappa in [10, 1000] and kappa*eps in (0, 0.4].
std::vector<PerturbationCase> perturbation_corpus(int count, Index dim, std::uint64_t seed);

/// Eigenvalue power laws of Laplacian-power truths across lattice sizes.
struct EigenScaling {
  std::vector<double> mesh;
  std::vector<double> lambda_min;
  std::vector<double> lambda_max;
  std::vector<double> diag_min;
  std::vector<double> diag_max;
  double slope_max = 0.0;       // log lambda_max against log h
  double slope_min = 0.0;       // log lambda_min against log h
  double spread_min = 0.0;      // max/min of lambda_min h^{-d}
  double spread_max = 0.0;      // max/min of lambda_max h^{2s-d}
  double spread_diag = 0.0;     // max/min over p of diag extremes scaled by h^{2s-d}
};

EigenScaling eigen_scaling(const std::vector<Index>& sides, int d, int s);

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::vector<std::pair<std::string, double>> stats;
  std::string detail;
};

struct VerifyOptions {
  /// Empty runs every suite.
  std::vector<std::string> suites;
  /// Negative control: feed an asymmetric matrix to the symmetry suite.
  bool inject_asymmetric = false;
  std::uint64_t seed = 1;
};

const std::vector<std::string>& suite_names();
std::vector<SuiteResult> run_verification(const VerifyOptions& options);

}  // namespace gpprec

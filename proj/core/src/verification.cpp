#include "gpprec/verification.hpp"

#include "gpprec/cholesky_factor.hpp"
#include "gpprec/errors.hpp"
#include "gpprec/estimator.hpp"
#include "gpprec/random.hpp"
#include "gpprec/stats.hpp"
#include "gpprec/truth.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace gpprec {

namespace {

double spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi / *lo;
}

std::vector<Index> random_level_sizes(Index total, int q, CounterRng& rng) {
  // q positive parts summing to total.
  std::vector<Index> cuts;
  while (static_cast<int>(cuts.size()) < q - 1) {
    const Index c = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(total - 1)));
    if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<Index> sizes;
  Index prev = 0;
  for (Index c : cuts) {
    sizes.push_back(c - prev);
    prev = c;
  }
  sizes.push_back(total - prev);
  return sizes;
}

SuiteResult suite_symmetry(const VerifyOptions& opt) {
  SuiteResult r{"symmetry", true, {}, {}};
  const GroundTruth truth = build_lattice_precision(12, 1, 1);
  EstimatorConfig cfg;
  cfg.b_override = 3;
  Matrix est = estimate_precision(sample(truth, 400, opt.seed), LatticeShape(12, 1), cfg).matrix.matrix();
  if (opt.inject_asymmetric) est(0, 1) += 1e-3;
  const double asym = (est - est.transpose()).cwiseAbs().maxCoeff();
  r.stats.emplace_back("max_asymmetry", asym);
  r.passed = asym == 0.0;
  if (!r.passed) r.detail = "estimate is not exactly symmetric";
  return r;
}

SuiteResult suite_screening(const VerifyOptions& opt) {
  SuiteResult r{"screening", true, {}, {}};
  const SiteCloud cloud = measure_cloud(perturbed_grid_sites(20, 1, 64, 0.8, opt.seed));
  const GroundTruth truth = build_green_restriction(64, 1, 2, cloud);
  const ScreeningProfile prof = screening_profile(truth);
  if (!prof.fit) {
    r.passed = false;
    r.detail = "fewer than two bins above the numerical floor";
    return r;
  }
  r.stats.emplace_back("slope", prof.fit->slope);
  r.stats.emplace_back("r_squared", prof.fit->r_squared);
  r.stats.emplace_back("bins", static_cast<double>(prof.fitted_bins));
  r.passed = prof.fit->slope < 0.0 && prof.fit->r_squared >= 0.9;
  if (!r.passed) r.detail = "decay fit below R^2 0.9 or not decreasing";
  return r;
}

SuiteResult suite_eigen(const VerifyOptions&) {
  SuiteResult r{"eigen-scaling", true, {}, {}};
  const int d = 1, s = 2;
  const EigenScaling e = eigen_scaling({8, 16, 32, 64}, d, s);
  const double target = d - 2 * s;
  r.stats.emplace_back("slope_max", e.slope_max);
  r.stats.emplace_back("slope_min", e.slope_min);
  r.stats.emplace_back("spread_min", e.spread_min);
  r.stats.emplace_back("spread_max", e.spread_max);
  r.stats.emplace_back("spread_diag", e.spread_diag);
  r.passed = std::abs(e.slope_max - target) <= 0.15 * std::abs(target) &&
             std::abs(e.slope_min - d) <= 0.15 * d && e.spread_min <= 10.0 && e.spread_max <= 10.0 &&
             e.spread_diag <= 10.0;
  if (!r.passed) r.detail = "eigenvalue power law outside tolerance";
  return r;
}

SuiteResult suite_perturbation(const VerifyOptions& opt) {
  SuiteResult r{"perturbation", true, {}, {}};
  const auto corpus = perturbation_corpus(100, 20, opt.seed);
  double worst_inv = 0.0, worst_chol = 0.0, worst_sqrt = 0.0;
  int failures = 0;
  for (const auto& c : corpus) {
    worst_inv = std::max(worst_inv, c.inverse_error / c.inverse_bound);
    worst_chol = std::max(worst_chol, c.cholesky_error / c.cholesky_bound);
    worst_sqrt = std::max(worst_sqrt, c.sqrt_error / c.sqrt_bound);
    if (!c.holds()) ++failures;
  }
  r.stats.emplace_back("worst_inverse_ratio", worst_inv);
  r.stats.emplace_back("worst_cholesky_ratio", worst_chol);
  r.stats.emplace_back("worst_sqrt_ratio", worst_sqrt);
  r.stats.emplace_back("violations", failures);
  r.passed = failures == 0;
  if (!r.passed) r.detail = "a perturbation bound was exceeded";
  return r;
}

SuiteResult suite_block_inverse(const VerifyOptions& opt) {
  SuiteResult r{"block-inverse", true, {}, {}};
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Index dim = 2 + i % 9;
    const DenseSymMatrix a = random_spd(dim, 100.0, opt.seed * 1000 + static_cast<std::uint64_t>(i));
    const Matrix direct = spd_inverse(a).matrix();
    for (Index split = 1; split < dim; ++split) {
      worst = std::max(worst, relative_spectral_error(block_inverse_schur(a, split).assemble(), direct));
    }
  }
  r.stats.emplace_back("worst_relative_error", worst);
  r.passed = worst <= 1e-9;
  if (!r.passed) r.detail = "Schur block inverse disagrees with the direct inverse";
  return r;
}

SuiteResult suite_ols(const VerifyOptions& opt) {
  SuiteResult r{"ols", true, {}, {}};
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Index dim = 3 + i % 6;
    const DenseSymMatrix sigma = random_spd(dim, 20.0, opt.seed * 7919 + static_cast<std::uint64_t>(i));
    const SampleMatrix z = sample_gaussian(sigma, 50, opt.seed + static_cast<std::uint64_t>(i));
    const Matrix inv = spd_inverse(sample_covariance(z)).matrix();
    for (Index row = 0; row < dim; ++row) {
      const Vector ols = ols_plugin_row(z, row);
      worst = std::max(worst, (ols - inv.row(row).transpose()).norm() / inv.row(row).norm());
    }
  }
  r.stats.emplace_back("worst_relative_error", worst);
  r.passed = worst <= 1e-10;
  if (!r.passed) r.detail = "OLS plug-in rows differ from the inverted sample covariance";
  return r;
}

SuiteResult suite_block_cholesky(const VerifyOptions& opt) {
  SuiteResult r{"block-cholesky", true, {}, {}};
  CounterRng rng(opt.seed, 0x62636b);
  double worst_rec = 0.0, worst_direct = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Index dim = 4 + static_cast<Index>(rng.below(37));
    const int q = 1 + static_cast<int>(rng.below(4));
    const LevelPartition levels(random_level_sizes(dim, q, rng));
    const DenseSymMatrix omega = random_spd(dim, 1e3, opt.seed * 31 + static_cast<std::uint64_t>(i));
    const BlockTriangularFactor f = exact_block_factor(omega, levels, 1 + i % 3);
    worst_rec = std::max(worst_rec, relative_spectral_error(f.reconstruct(), omega.matrix()));
    // Upper factor with U U^T = Omega, from the reversed lower Cholesky.
    const Index n = dim;
    Matrix rev(n, n);
    for (Index a = 0; a < n; ++a) {
      for (Index b = 0; b < n; ++b) rev(a, b) = omega(n - 1 - a, n - 1 - b);
    }
    const Matrix l = cholesky_lower(DenseSymMatrix(rev)).matrix();
    Matrix u(n, n);
    for (Index a = 0; a < n; ++a) {
      for (Index b = 0; b < n; ++b) u(a, b) = l(n - 1 - a, n - 1 - b);
    }
    worst_direct = std::max(worst_direct, relative_spectral_error(f.upper(), u));
  }
  r.stats.emplace_back("worst_reconstruction", worst_rec);
  r.stats.emplace_back("worst_direct_mismatch", worst_direct);
  r.passed = worst_rec <= 1e-9 && worst_direct <= 1e-8;
  if (!r.passed) r.detail = "block factor does not reproduce Omega";
  return r;
}

using SuiteFn = std::function<SuiteResult(const VerifyOptions&)>;

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> suites = {
      {"symmetry", suite_symmetry},           {"screening", suite_screening},
      {"eigen-scaling", suite_eigen},         {"perturbation", suite_perturbation},
      {"block-inverse", suite_block_inverse}, {"ols", suite_ols},
      {"block-cholesky", suite_block_cholesky},
  };
  return suites;
}

}  // namespace

DenseSymMatrix random_spd(Index dim, double kappa, std::uint64_t seed) {
  if (dim < 1 || !(kappa >= 1.0)) throw InvalidInput("random_spd needs dim >= 1 and kappa >= 1");
  const Matrix g = standard_normal(dim, dim, seed, 0x737064);
  const Eigen::HouseholderQR<Matrix> qr(g);
  const Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
  Vector lambda(dim);
  CounterRng rng(seed, 0x6c616d);
  for (Index i = 0; i < dim; ++i) lambda(i) = std::pow(kappa, rng.uniform());
  lambda(0) = 1.0;
  if (dim > 1) lambda(dim - 1) = kappa;
  return DenseSymMatrix(q * lambda.asDiagonal() * q.transpose());
}

DenseSymMatrix random_symmetric(Index dim, double norm, std::uint64_t seed) {
  const Matrix g = standard_normal(dim, dim, seed, 0x73796d);
  const DenseSymMatrix e(g);
  const double current = spectral_norm(e);
  return DenseSymMatrix(e.matrix() * (norm / current));
}

PerturbationCase perturbation_case(Index dim, double kappa, double kappa_eps, std::uint64_t seed) {
  const DenseSymMatrix b = random_spd(dim, kappa, seed);
  PerturbationCase c;
  c.kappa = condition_number(b);
  c.eps = kappa_eps / c.kappa;
  const double norm_b = spectral_norm(b);
  const DenseSymMatrix b_hat(b.matrix() + random_symmetric(dim, c.eps * norm_b, seed + 1).matrix());
  c.eps = spectral_norm(DenseSymMatrix(b_hat.matrix() - b.matrix())) / norm_b;
  const double ke = c.kappa * c.eps;

  c.inverse_error = relative_spectral_error(spd_inverse(b_hat).matrix(), spd_inverse(b).matrix());
  c.inverse_bound = ke / (1.0 - ke);
  c.cholesky_error = relative_spectral_error(cholesky_lower(b_hat).matrix(), cholesky_lower(b).matrix());
  c.cholesky_bound = (2.0 * std::log2(static_cast<double>(dim)) + 4.0) * ke;
  c.sqrt_error = relative_spectral_error(spd_sqrt(b_hat).matrix(), spd_sqrt(b).matrix());
  c.sqrt_bound = std::sqrt(c.kappa) * c.eps;
  return c;
}

std::vector<PerturbationCase> perturbation_corpus(int count, Index dim, std::uint64_t seed) {
  CounterRng rng(seed, 0x707274);
  std::vector<PerturbationCase> out;
  for (int i = 0; i < count; ++i) {
    const double kappa = std::pow(10.0, rng.uniform(1.0, 3.0));
    const double kappa_eps = 0.4 * rng.uniform();
    out.push_back(perturbation_case(dim, kappa, kappa_eps, seed * 104729 + static_cast<std::uint64_t>(2 * i)));
  }
  return out;
}

EigenScaling eigen_scaling(const std::vector<Index>& sides, int d, int s) {
  EigenScaling e;
  std::vector<double> min_scaled, max_scaled, diag_scaled;
  for (Index p : sides) {
    const GroundTruth t = build_lattice_precision(p, d, s);
    const double h = t.mesh();
    const auto [lo, hi] = eigen_range(t.omega);
    e.mesh.push_back(h);
    e.lambda_min.push_back(lo);
    e.lambda_max.push_back(hi);
    const Vector diag = t.omega.matrix().diagonal();
    e.diag_min.push_back(diag.minCoeff());
    e.diag_max.push_back(diag.maxCoeff());
    const double tail = std::pow(h, 2.0 * s - d);
    min_scaled.push_back(lo / std::pow(h, d));
    max_scaled.push_back(hi * tail);
    diag_scaled.push_back(diag.minCoeff() * tail);
    diag_scaled.push_back(diag.maxCoeff() * tail);
  }
  e.slope_max = fit_loglog(e.mesh, e.lambda_max).slope;
  e.slope_min = fit_loglog(e.mesh, e.lambda_min).slope;
  e.spread_min = spread(min_scaled);
  e.spread_max = spread(max_scaled);
  e.spread_diag = spread(diag_scaled);
  return e;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : registry()) n.push_back(name);
    return n;
  }();
  return names;
}

std::vector<SuiteResult> run_verification(const VerifyOptions& options) {
  for (const auto& name : options.suites) {
    if (std::find(suite_names().begin(), suite_names().end(), name) == suite_names().end()) {
      throw InvalidInput("unknown verification suite '" + name + "'");
    }
  }
  std::vector<SuiteResult> out;
  for (const auto& [name, fn] : registry()) {
    if (!options.suites.empty() &&
        std::find(options.suites.begin(), options.suites.end(), name) == options.suites.end()) {
      continue;
    }
    try {
      out.push_back(fn(options));
    } catch (const Error& e) {
      out.push_back({name, false, {}, e.what()});
    }
  }
  return out;
}

}  // namespace gpprec

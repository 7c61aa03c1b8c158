#include "gpprec/cholesky_factor.hpp"

#include "gpprec/errors.hpp"
#include "gpprec/matrix_io.hpp"

#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>

namespace gpprec {

namespace {

std::vector<Index> iota_range(Index begin, Index end) {
  std::vector<Index> out(static_cast<std::size_t>(end - begin));
  std::iota(out.begin(), out.end(), begin);
  return out;
}

double h_pow(double exponent) { return std::pow(LevelPartition::h, exponent); }

void check_scales(const ScaleEstimates& scales, const LevelPartition& levels) {
  if (static_cast<int>(scales.size()) != levels.q()) {
    throw InvalidInput("expected " + std::to_string(levels.q()) + " scales, got " + std::to_string(scales.size()));
  }
  for (int k = 1; k <= levels.q(); ++k) {
    const ScaleEstimate& s = scales[static_cast<std::size_t>(k - 1)];
    if (s.omega.dim() != levels.prefix(k) || s.b.dim() != levels.size(k) || s.ltilde.dim() != levels.size(k)) {
      throw InvalidInput("scale " + std::to_string(k) + " is missing or has the wrong size");
    }
  }
}

// Off-diagonal blocks use `left` * omega_k(J_k, J_l); diagonal uses `diag`.
template <typename Left, typename Diag>
BlockTriangularFactor assemble(const ScaleEstimates& scales, const LevelPartition& levels, int d, Left left,
                               Diag diag) {
  check_scales(scales, levels);
  BlockTriangularFactor out(levels, d);
  for (int k = 1; k <= levels.q(); ++k) {
    const ScaleEstimate& s = scales[static_cast<std::size_t>(k - 1)];
    const double kd = static_cast<double>(k * d);
    const Index row0 = levels.start(k);
    const Index rows = levels.size(k);
    const Matrix lhs = left(s);
    for (int l = 1; l < k; ++l) {
      const Matrix omega_kl = s.omega.matrix().block(row0, levels.start(l), rows, levels.size(l));
      out.set_block(k, l, h_pow(-kd / 2.0) * lhs * omega_kl);
    }
    out.set_block(k, k, h_pow(kd / 2.0) * diag(s));
  }
  return out;
}

}  // namespace

BlockTriangularFactor::BlockTriangularFactor(LevelPartition levels, int d) : levels_(std::move(levels)), d_(d) {}

void BlockTriangularFactor::set_block(int k, int l, Matrix block) {
  if (l < 1 || l > k || k > levels_.q()) throw InvalidInput("factor block (k, l) needs 1 <= l <= k <= q");
  if (block.rows() != levels_.size(k) || block.cols() != levels_.size(l)) {
    throw InvalidInput("factor block has the wrong shape");
  }
  blocks_[{k, l}] = std::move(block);
}

const Matrix& BlockTriangularFactor::block(int k, int l) const {
  const auto it = blocks_.find({k, l});
  if (it == blocks_.end()) throw InvalidInput("factor block (" + std::to_string(k) + ", " + std::to_string(l) + ") absent");
  return it->second;
}

Matrix BlockTriangularFactor::transpose_dense() const {
  const Index m = levels_.total();
  Matrix ut = Matrix::Zero(m, m);
  for (const auto& [key, blk] : blocks_) {
    ut.block(levels_.start(key.first), levels_.start(key.second), blk.rows(), blk.cols()) = blk;
  }
  return ut;
}

Matrix BlockTriangularFactor::reconstruct() const {
  const Matrix ut = transpose_dense();
  return ut.transpose() * ut;
}

DenseSymMatrix estimate_B(const DenseSymMatrix& omega_k, const LevelPartition& levels, int k, int d) {
  if (omega_k.dim() != levels.prefix(k)) throw InvalidInput("omega_k must be indexed by I^(k)");
  const Index j0 = levels.start(k);
  const Index n = levels.size(k);
  DenseSymMatrix b(h_pow(-static_cast<double>(k * d)) * omega_k.matrix().block(j0, j0, n, n));
  (void)cholesky_lower(b);
  return b;
}

ScaleEstimate make_scale(const DenseSymMatrix& omega_k, const LevelPartition& levels, int k, int d) {
  ScaleEstimate s;
  s.omega = omega_k;
  s.b = estimate_B(omega_k, levels, k, d);
  s.ltilde = cholesky_lower(spd_inverse(s.b));
  return s;
}

ScaleEstimates exact_scales(const DenseSymMatrix& omega, const LevelPartition& levels, int d) {
  if (omega.dim() != levels.total()) throw InvalidInput("omega dim does not match the level partition");
  const DenseSymMatrix sigma = spd_inverse(omega);
  ScaleEstimates out;
  for (int k = 1; k <= levels.q(); ++k) {
    const auto idx = iota_range(0, levels.prefix(k));
    const DenseSymMatrix omega_k = k == levels.q() ? omega : spd_inverse(DenseSymMatrix(submatrix(sigma.matrix(), idx, idx)));
    out.push_back(make_scale(omega_k, levels, k, d));
  }
  return out;
}

BlockTriangularFactor assemble_U(const ScaleEstimates& scales, const LevelPartition& levels, int d) {
  return assemble(
      scales, levels, d, [](const ScaleEstimate& s) { return Matrix(s.ltilde.matrix().transpose()); },
      [](const ScaleEstimate& s) { return s.ltilde.inverse(); });
}

BlockTriangularFactor assemble_U_star(const ScaleEstimates& scales, const LevelPartition& levels, int d) {
  return assemble(
      scales, levels, d, [](const ScaleEstimate& s) { return spd_inverse_sqrt(s.b).matrix(); },
      [](const ScaleEstimate& s) { return spd_sqrt(s.b).matrix(); });
}

BlockTriangularFactor exact_block_factor(const DenseSymMatrix& omega, const LevelPartition& levels, int d) {
  return assemble_U(exact_scales(omega, levels, d), levels, d);
}

BlockTriangularFactor exact_block_factor_star(const DenseSymMatrix& omega, const LevelPartition& levels, int d) {
  return assemble_U_star(exact_scales(omega, levels, d), levels, d);
}

ScaleEstimates estimate_scales(const CovarianceSource& ordered, const Matrix& sites, const LevelPartition& levels,
                               int d, const CholeskyConfig& config, std::vector<ScaleReport>* report) {
  if (ordered.dim() != levels.total()) throw InvalidInput("sample dim does not match the level partition");
  if (config.per_scale == ScaleEstimator::scattered && sites.rows() != levels.total()) {
    throw InvalidInput("site count does not match the level partition");
  }
  ScaleEstimates out;
  if (report) report->clear();
  for (int k = 1; k <= levels.q(); ++k) {
    try {
      const Index mk = levels.prefix(k);
      const auto idx = iota_range(0, mk);
      const CovarianceSource sub = ordered.columns(idx);
      ScaleReport rep;
      DenseSymMatrix omega_k;

      bool full = config.per_scale == ScaleEstimator::full_inverse;
      if (!full && !sub.is_population() && config.estimator.fallback_enabled) {
        // Same small-problem threshold as the lattice estimator, with the
        // side length of an equivalent lattice.
        const double side = std::ceil(std::pow(static_cast<double>(mk), 1.0 / d) - 1e-9);
        const double kappa = config.estimator.kappa_hint.value_or(static_cast<double>(mk));
        full = side <= std::log(static_cast<double>(sub.n_samples()) * kappa);
      }
      if (full) {
        omega_k = spd_inverse(sub.full());
        rep.path = EstimatePath::fallback_full_inverse;
        rep.b = mk;
      } else {
        const SiteCloud cloud = measure_cloud(sites.topRows(mk));
        EstimatorConfig cfg = config.estimator;
        cfg.kappa_hint.reset();
        const ScatteredEstimate est =
            embed_and_estimate(sub, cloud, cfg, config.seed + static_cast<std::uint64_t>(k), config.scatter);
        omega_k = est.omega;
        rep.path = est.path;
        rep.b = est.b;
      }
      out.push_back(make_scale(omega_k, levels, k, d));
      if (report) report->push_back(rep);
    } catch (const ScaleFailure&) {
      throw;
    } catch (const Error& e) {
      throw ScaleFailure(k, e.what());
    }
  }
  return out;
}

BlockTriangularFactor estimate_cholesky(const SampleMatrix& ordered, const Matrix& sites,
                                        const LevelPartition& levels, int d, const CholeskyConfig& config) {
  return assemble_U(estimate_scales(CovarianceSource::from_samples(ordered), sites, levels, d, config), levels, d);
}

void write_factor(std::ostream& out, const BlockTriangularFactor& factor) {
  const LevelPartition& lv = factor.levels();
  out << lv.total() << ' ' << lv.q() << ' ' << factor.d() << '\n';
  for (int k = 1; k <= lv.q(); ++k) out << (k > 1 ? " " : "") << lv.size(k);
  out << '\n';
  for (const auto& [key, blk] : factor.blocks()) {
    out << key.first << ' ' << key.second << ' ' << blk.rows() << ' ' << blk.cols() << '\n';
    write_rows(out, blk);
  }
}

BlockTriangularFactor read_factor(std::istream& in) {
  Index m = 0;
  int q = 0, d = 0;
  if (!(in >> m >> q >> d) || m < 1 || q < 1) throw InvalidInput("factor header must be 'M q d'");
  std::vector<Index> sizes(static_cast<std::size_t>(q));
  for (auto& s : sizes) {
    if (!(in >> s)) throw InvalidInput("factor level sizes missing");
  }
  BlockTriangularFactor f(LevelPartition(sizes), d);
  if (f.levels().total() != m) throw InvalidInput("factor level sizes do not sum to M");
  int k = 0, l = 0;
  Index r = 0, c = 0;
  while (in >> k >> l >> r >> c) f.set_block(k, l, read_rows(in, r, c));
  return f;
}

}  // namespace gpprec

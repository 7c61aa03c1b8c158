#include "gpprec/estimator.hpp"

#include "gpprec/errors.hpp"
#include "parallel.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace gpprec {

namespace {

constexpr Index kLocalLambda = 2;

// Inverse of the covariance over W_{j,2}, or LocalSingular.
Matrix window_inverse(const CovarianceSource& source, Index j, const std::vector<Index>& window) {
  try {
    return spd_inverse(source.restricted(window)).matrix();
  } catch (const NotPositiveDefinite&) {
    throw LocalSingular(static_cast<std::size_t>(j), window.size(),
                        static_cast<std::size_t>(source.n_samples()));
  }
}

std::vector<Index> positions_in(const std::vector<Index>& window, const std::vector<Index>& members) {
  std::vector<Index> pos;
  pos.reserve(members.size());
  for (Index v : members) {
    const auto it = std::lower_bound(window.begin(), window.end(), v);
    pos.push_back(static_cast<Index>(it - window.begin()));
  }
  return pos;
}

}  // namespace

CovarianceSource CovarianceSource::from_samples(SampleMatrix samples) {
  CovarianceSource s;
  s.samples_ = std::make_shared<const SampleMatrix>(std::move(samples));
  return s;
}

CovarianceSource CovarianceSource::from_population(DenseSymMatrix sigma) {
  if (sigma.dim() < 1) throw InvalidInput("population covariance is empty");
  CovarianceSource s;
  s.sigma_ = std::make_shared<const DenseSymMatrix>(std::move(sigma));
  return s;
}

Index CovarianceSource::dim() const noexcept {
  if (samples_) return samples_->dim();
  return sigma_ ? sigma_->dim() : 0;
}

const SampleMatrix& CovarianceSource::samples() const {
  if (!samples_) throw InvalidInput("covariance source holds a population covariance, not samples");
  return *samples_;
}

const DenseSymMatrix& CovarianceSource::population() const {
  if (!sigma_) throw InvalidInput("covariance source holds samples, not a population covariance");
  return *sigma_;
}

DenseSymMatrix CovarianceSource::restricted(std::span<const Index> idx) const {
  if (samples_) return sample_covariance(*samples_, idx);
  return DenseSymMatrix(submatrix(sigma_->matrix(), idx, idx));
}

DenseSymMatrix CovarianceSource::full() const {
  if (samples_) return sample_covariance(*samples_);
  return *sigma_;
}

CovarianceSource CovarianceSource::columns(std::span<const Index> idx) const {
  if (idx.empty()) throw InvalidInput("covariance source restricted to no coordinates");
  if (sigma_) return from_population(restricted(idx));
  const Matrix& z = samples_->rows();
  Matrix sub(z.rows(), static_cast<Index>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c) {
    if (idx[c] < 0 || idx[c] >= z.cols()) throw InvalidInput("column index out of range");
    sub.col(static_cast<Index>(c)) = z.col(idx[c]);
  }
  return from_samples(SampleMatrix(std::move(sub)));
}

void EstimatorConfig::validate(Index p) const {
  if (b_override && (*b_override < 1 || *b_override > p)) {
    throw InvalidInput("b_override must satisfy 1 <= b <= p (b=" + std::to_string(*b_override) +
                       ", p=" + std::to_string(p) + ")");
  }
  if (kappa_hint && !(*kappa_hint >= 1.0)) throw InvalidInput("kappa_hint must be >= 1");
  if (!(block_constant > 0.0)) throw InvalidInput("block_constant must be positive");
}

const char* to_string(EstimatePath path) noexcept {
  return path == EstimatePath::blockwise ? "blockwise" : "fallback_full_inverse";
}

Index choose_block_size(Index n_samples, double kappa) { return choose_block_size(n_samples, kappa, 1.0); }

Index choose_block_size(Index n_samples, double kappa, double block_constant) {
  if (n_samples < 1) throw InvalidInput("choose_block_size needs N >= 1");
  if (!(kappa >= 1.0)) throw InvalidInput("choose_block_size needs kappa >= 1");
  const double raw = block_constant * std::log(static_cast<double>(n_samples) * kappa);
  // Absorb rounding so that exact integers are not bumped up by one.
  const double b = std::ceil(raw - 1e-12);
  return std::max<Index>(1, static_cast<Index>(b));
}

Matrix local_estimate(const CovarianceSource& source, const BlockScheme& scheme, Index j, Index jp) {
  if (source.dim() != scheme.shape().size()) throw InvalidInput("source dim does not match the lattice");
  if (scheme.block_distance(j, jp) > 1) throw InvalidInput("local estimate requested outside the band");
  const Neighborhood nb = scheme.neighborhood(j, kLocalLambda);
  const Matrix inv = window_inverse(source, j, nb.vertices);
  const auto rows = positions_in(nb.vertices, scheme.vertices(j));
  const auto cols = positions_in(nb.vertices, scheme.vertices(jp));
  return submatrix(inv, rows, cols);
}

Matrix local_estimate(const SampleMatrix& samples, const BlockScheme& scheme, Index j, Index jp) {
  return local_estimate(CovarianceSource::from_samples(samples), scheme, j, jp);
}

LocalBlocks local_estimates(const CovarianceSource& source, const BlockScheme& scheme, unsigned threads) {
  if (source.dim() != scheme.shape().size()) throw InvalidInput("source dim does not match the lattice");
  const Index count = scheme.block_count();
  std::vector<std::vector<std::pair<Index, Matrix>>> rows(static_cast<std::size_t>(count));
  detail::parallel_for(count, threads, [&](long jl) {
    const Index j = jl;
    const Neighborhood window = scheme.neighborhood(j, kLocalLambda);
    const Matrix inv = window_inverse(source, j, window.vertices);
    const auto row_pos = positions_in(window.vertices, scheme.vertices(j));
    for (Index jp : scheme.neighborhood(j, 1).blocks) {
      const auto col_pos = positions_in(window.vertices, scheme.vertices(jp));
      rows[static_cast<std::size_t>(j)].emplace_back(jp, submatrix(inv, row_pos, col_pos));
    }
  });
  LocalBlocks out;
  for (Index j = 0; j < count; ++j) {
    for (auto& [jp, block] : rows[static_cast<std::size_t>(j)]) out.emplace(std::make_pair(j, jp), std::move(block));
  }
  return out;
}

Matrix assemble_unsymmetrized(const LocalBlocks& locals, const BlockScheme& scheme) {
  const Index n = scheme.shape().size();
  Matrix tilde = Matrix::Zero(n, n);
  for (Index j = 0; j < scheme.block_count(); ++j) {
    const auto& rows = scheme.vertices(j);
    for (Index jp : scheme.neighborhood(j, 1).blocks) {
      const auto it = locals.find({j, jp});
      if (it == locals.end()) {
        throw InvalidInput("missing local block (" + std::to_string(j) + ", " + std::to_string(jp) + ")");
      }
      const auto& cols = scheme.vertices(jp);
      const Matrix& t = it->second;
      if (t.rows() != static_cast<Index>(rows.size()) || t.cols() != static_cast<Index>(cols.size())) {
        throw InvalidInput("local block (" + std::to_string(j) + ", " + std::to_string(jp) + ") has the wrong shape");
      }
      for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
          tilde(rows[r], cols[c]) = t(static_cast<Index>(r), static_cast<Index>(c));
        }
      }
    }
  }
  return tilde;
}

PrecisionEstimate assemble_global(const LocalBlocks& locals, const BlockScheme& scheme) {
  PrecisionEstimate out;
  out.matrix = DenseSymMatrix(assemble_unsymmetrized(locals, scheme));
  out.scheme = scheme;
  out.path = EstimatePath::blockwise;
  return out;
}

PrecisionEstimate estimate_precision(const SampleMatrix& samples, const LatticeShape& shape,
                                     const EstimatorConfig& config) {
  return estimate_precision(CovarianceSource::from_samples(samples), shape, config);
}

PrecisionEstimate estimate_precision(const CovarianceSource& source, const LatticeShape& shape,
                                     const EstimatorConfig& config) {
  if (source.dim() != shape.size()) {
    throw InvalidInput("sample dim " + std::to_string(source.dim()) + " does not equal p^d = " +
                       std::to_string(shape.size()));
  }
  config.validate(shape.p());
  const Index p = shape.p();

  if (source.is_population()) {
    if (!config.b_override) throw InvalidInput("population input needs an explicit block width");
    const BlockScheme scheme(shape, *config.b_override);
    return assemble_global(local_estimates(source, scheme, config.threads), scheme);
  }

  const Index n = source.n_samples();
  const double kappa = config.kappa_hint.value_or(static_cast<double>(shape.size()));
  const double log_nk = std::log(static_cast<double>(n) * kappa);
  if (config.fallback_enabled && static_cast<double>(p) <= log_nk) {
    PrecisionEstimate out;
    out.matrix = spd_inverse(source.full());
    out.scheme = BlockScheme(shape, p);
    out.path = EstimatePath::fallback_full_inverse;
    return out;
  }
  const Index b = config.b_override.value_or(std::min(p, choose_block_size(n, kappa, config.block_constant)));
  const BlockScheme scheme(shape, b);
  return assemble_global(local_estimates(source, scheme, config.threads), scheme);
}

Vector ols_plugin_row(const SampleMatrix& samples, Index i) {
  const Matrix& z = samples.rows();
  const Index dim = z.cols();
  if (i < 0 || i >= dim) throw InvalidInput("ols_plugin_row: coordinate out of range");
  const double n = static_cast<double>(z.rows());
  const Vector y = z.col(i);

  std::vector<Index> others;
  for (Index k = 0; k < dim; ++k) {
    if (k != i) others.push_back(k);
  }
  Vector beta = Vector::Zero(dim - 1);
  Vector residual = y;
  if (!others.empty()) {
    Matrix x(z.rows(), dim - 1);
    for (std::size_t c = 0; c < others.size(); ++c) x.col(static_cast<Index>(c)) = z.col(others[c]);
    // Normal equations through Cholesky so a rank-deficient design surfaces
    // as NotPositiveDefinite.
    const LowerTriangular l = cholesky_lower(DenseSymMatrix(x.transpose() * x));
    beta = cholesky_solve(l, x.transpose() * y);
    residual = y - x * beta;
  }
  const double rss = residual.squaredNorm();
  if (!(rss > kSpdTolerance * y.squaredNorm())) throw NotPositiveDefinite(static_cast<std::size_t>(i), "zero regression residual");

  Vector row(dim);
  row(i) = n / rss;
  for (std::size_t c = 0; c < others.size(); ++c) row(others[c]) = -n * beta(static_cast<Index>(c)) / rss;
  return row;
}

}  // namespace gpprec

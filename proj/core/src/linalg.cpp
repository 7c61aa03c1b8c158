#include "gpprec/linalg.hpp"

#include "gpprec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gpprec {

namespace {

Matrix symmetrized(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw InvalidInput("symmetric matrix must be square, got " + std::to_string(a.rows()) + "x" +
                       std::to_string(a.cols()));
  }
  if (a.rows() < 1) throw InvalidInput("symmetric matrix must have dim >= 1");
  return 0.5 * (a + a.transpose());
}

Eigen::SelfAdjointEigenSolver<Matrix> eigen_decompose(const DenseSymMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw NumericalFailure("symmetric eigensolver did not converge");
  return solver;
}

double power_iteration_norm(const Matrix& a) {
  const Index n = a.rows();
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = 1.0 + 0.01 * std::sin(static_cast<double>(i) + 1.0);
  v.normalize();
  double estimate = 0.0;
  const Index cap = 50 * n;
  for (Index it = 0; it < cap; ++it) {
    Vector w = a * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    if (it > 0 && std::abs(norm - estimate) <= 1e-9 * norm) return norm;
    estimate = norm;
    v = w / norm;
  }
  throw NumericalFailure("power iteration did not converge within " + std::to_string(cap) +
                         " iterations");
}

}  // namespace

DenseSymMatrix::DenseSymMatrix(const Matrix& entries) : m_(symmetrized(entries)) {}

DenseSymMatrix DenseSymMatrix::identity(Index dim) {
  return DenseSymMatrix(Matrix::Identity(dim, dim));
}

DenseSymMatrix DenseSymMatrix::diagonal(const Vector& entries) {
  return DenseSymMatrix(Matrix(entries.asDiagonal()));
}

LowerTriangular::LowerTriangular(Matrix entries) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols() || m_.rows() < 1) throw InvalidInput("triangular factor must be square");
  for (Index j = 0; j < m_.cols(); ++j) {
    if (!(m_(j, j) > 0.0)) throw InvalidInput("triangular factor needs a positive diagonal");
    for (Index i = 0; i < j; ++i) {
      if (m_(i, j) != 0.0) throw InvalidInput("triangular factor has entries above the diagonal");
    }
  }
}

Matrix LowerTriangular::inverse() const {
  Matrix inv = m_.triangularView<Eigen::Lower>().solve(Matrix::Identity(dim(), dim()));
  inv.triangularView<Eigen::StrictlyUpper>().setZero();
  return inv;
}

SampleMatrix::SampleMatrix(Matrix rows) : z_(std::move(rows)) {
  if (z_.rows() < 1) throw InvalidInput("sample set is empty");
  if (z_.cols() < 1) throw InvalidInput("samples must have dim >= 1");
}

DenseSymMatrix sample_covariance(const SampleMatrix& samples) {
  const Matrix& z = samples.rows();
  Matrix s = Matrix::Zero(z.cols(), z.cols());
  s.selfadjointView<Eigen::Lower>().rankUpdate(z.transpose(), 1.0 / static_cast<double>(z.rows()));
  s.triangularView<Eigen::StrictlyUpper>() = s.transpose();
  return DenseSymMatrix(s);
}

DenseSymMatrix sample_covariance(const SampleMatrix& samples, std::span<const Index> columns) {
  if (columns.empty()) throw InvalidInput("covariance restriction needs at least one column");
  const Matrix& z = samples.rows();
  Matrix sub(z.rows(), static_cast<Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] < 0 || columns[c] >= z.cols()) throw InvalidInput("column index out of range");
    sub.col(static_cast<Index>(c)) = z.col(columns[c]);
  }
  Matrix s = Matrix::Zero(sub.cols(), sub.cols());
  s.selfadjointView<Eigen::Lower>().rankUpdate(sub.transpose(), 1.0 / static_cast<double>(z.rows()));
  s.triangularView<Eigen::StrictlyUpper>() = s.transpose();
  return DenseSymMatrix(s);
}

LowerTriangular cholesky_lower(const DenseSymMatrix& a) {
  const Index n = a.dim();
  const Matrix& m = a.matrix();
  const double max_diag = m.diagonal().maxCoeff();
  if (!(max_diag > 0.0)) throw NotPositiveDefinite(0);
  const double threshold = kSpdTolerance * max_diag;

  // Left-looking column Cholesky.
  Matrix l = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    const double pivot = m(j, j) - l.row(j).head(j).squaredNorm();
    if (!(pivot > threshold)) throw NotPositiveDefinite(static_cast<std::size_t>(j));
    const double ljj = std::sqrt(pivot);
    l(j, j) = ljj;
    const Index rest = n - j - 1;
    if (rest > 0) {
      l.col(j).tail(rest) =
          (m.col(j).tail(rest) - l.bottomLeftCorner(rest, j) * l.row(j).head(j).transpose()) / ljj;
    }
  }
  return LowerTriangular(std::move(l));
}

Matrix cholesky_solve(const LowerTriangular& l, const Matrix& b) {
  if (b.rows() != l.dim()) throw InvalidInput("right-hand side has the wrong number of rows");
  Matrix y = l.matrix().triangularView<Eigen::Lower>().solve(b);
  return l.matrix().transpose().triangularView<Eigen::Upper>().solve(y);
}

DenseSymMatrix spd_inverse(const DenseSymMatrix& a) {
  const LowerTriangular l = cholesky_lower(a);
  const Matrix linv = l.inverse();
  return DenseSymMatrix(linv.transpose() * linv);
}

double spectral_norm(const DenseSymMatrix& a) {
  if (a.dim() <= kDenseEigenLimit) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalFailure("symmetric eigensolver did not converge");
    return solver.eigenvalues().cwiseAbs().maxCoeff();
  }
  return power_iteration_norm(a.matrix());
}

double operator_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

std::pair<double, double> eigen_range(const DenseSymMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalFailure("symmetric eigensolver did not converge");
  const Vector& ev = solver.eigenvalues();
  return {ev(0), ev(ev.size() - 1)};
}

double condition_number(const DenseSymMatrix& a) {
  (void)cholesky_lower(a);
  const auto [lo, hi] = eigen_range(a);
  if (!(lo > 0.0)) throw NotPositiveDefinite(0, "nonpositive eigenvalue");
  return hi / lo;
}

DenseSymMatrix spd_sqrt(const DenseSymMatrix& a) {
  (void)cholesky_lower(a);
  const auto solver = eigen_decompose(a);
  const Vector root = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Matrix& v = solver.eigenvectors();
  return DenseSymMatrix(v * root.asDiagonal() * v.transpose());
}

DenseSymMatrix spd_inverse_sqrt(const DenseSymMatrix& a) {
  (void)cholesky_lower(a);
  const auto solver = eigen_decompose(a);
  if (!(solver.eigenvalues()(0) > 0.0)) throw NotPositiveDefinite(0, "nonpositive eigenvalue");
  const Vector root = solver.eigenvalues().cwiseSqrt().cwiseInverse();
  const Matrix& v = solver.eigenvectors();
  return DenseSymMatrix(v * root.asDiagonal() * v.transpose());
}

Matrix BlockInverse::assemble() const {
  const Index n1 = top_left.rows();
  const Index n2 = bottom_right.rows();
  Matrix out(n1 + n2, n1 + n2);
  out.topLeftCorner(n1, n1) = top_left;
  out.topRightCorner(n1, n2) = top_right;
  out.bottomLeftCorner(n2, n1) = bottom_left;
  out.bottomRightCorner(n2, n2) = bottom_right;
  return out;
}

BlockInverse block_inverse_schur(const DenseSymMatrix& sigma, Index split) {
  const Index n = sigma.dim();
  if (split < 1 || split >= n) throw InvalidInput("block split must satisfy 1 <= split < dim");
  const Index n2 = n - split;
  const Matrix& s = sigma.matrix();
  const Matrix s11 = s.topLeftCorner(split, split);
  const Matrix s12 = s.topRightCorner(split, n2);
  const Matrix s21 = s.bottomLeftCorner(n2, split);
  const Matrix s22 = s.bottomRightCorner(n2, n2);

  const LowerTriangular l11 = cholesky_lower(DenseSymMatrix(s11));
  const LowerTriangular l22 = cholesky_lower(DenseSymMatrix(s22));

  // Schur complements of each diagonal block.
  const DenseSymMatrix schur11(s11 - s12 * cholesky_solve(l22, s21));
  const DenseSymMatrix schur22(s22 - s21 * cholesky_solve(l11, s12));
  const DenseSymMatrix inv_schur11 = spd_inverse(schur11);
  const DenseSymMatrix inv_schur22 = spd_inverse(schur22);

  BlockInverse out;
  out.top_left = inv_schur11.matrix();
  out.bottom_right = inv_schur22.matrix();
  out.top_right = -cholesky_solve(l11, s12) * inv_schur22.matrix();
  out.bottom_left = -cholesky_solve(l22, s21) * inv_schur11.matrix();
  return out;
}

Matrix submatrix(const Matrix& a, std::span<const Index> rows, std::span<const Index> cols) {
  Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] < 0 || rows[r] >= a.rows()) throw InvalidInput("row index out of range");
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (cols[c] < 0 || cols[c] >= a.cols()) throw InvalidInput("column index out of range");
      out(static_cast<Index>(r), static_cast<Index>(c)) = a(rows[r], cols[c]);
    }
  }
  return out;
}

double relative_spectral_error(const Matrix& estimate, const Matrix& truth) {
  if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols()) {
    throw InvalidInput("relative error needs matrices of equal shape");
  }
  const double denom = operator_norm(truth);
  if (denom == 0.0) throw InvalidInput("relative error against a zero matrix");
  return operator_norm(estimate - truth) / denom;
}

}  // namespace gpprec

#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace gpprec {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Square real matrix that is symmetric bit-for-bit. Every constructor path
/// symmetrizes its input as (A + A^T) / 2, which is exact in floating point.
class DenseSymMatrix {
 public:
  DenseSymMatrix() = default;
  explicit DenseSymMatrix(const Matrix& entries);

  static DenseSymMatrix identity(Index dim);
  static DenseSymMatrix diagonal(const Vector& entries);

  Index dim() const noexcept { return m_.rows(); }
  double operator()(Index i, Index j) const { return m_(i, j); }
  const Matrix& matrix() const noexcept { return m_; }

 private:
  Matrix m_;
};

/// Lower-triangular factor with strictly positive diagonal.
class LowerTriangular {
 public:
  LowerTriangular() = default;
  /// Throws InvalidInput if `entries` has nonzeros above the diagonal or a
  /// nonpositive diagonal entry.
  explicit LowerTriangular(Matrix entries);

  Index dim() const noexcept { return m_.rows(); }
  double operator()(Index i, Index j) const { return m_(i, j); }
  const Matrix& matrix() const noexcept { return m_; }

  /// Inverse, itself lower triangular.
  Matrix inverse() const;

 private:
  Matrix m_;
};

/// N observations of a dim-dimensional vector, one observation per row.
class SampleMatrix {
 public:
  SampleMatrix() = default;
  explicit SampleMatrix(Matrix rows);

  Index n_samples() const noexcept { return z_.rows(); }
  Index dim() const noexcept { return z_.cols(); }
  const Matrix& rows() const noexcept { return z_; }

 private:
  Matrix z_;
};

// Sample second moment (1/N) sum_n Z_n Z_n^T. The process is zero mean, so
// no centering is applied.
DenseSymMatrix sample_covariance(const SampleMatrix& samples);
DenseSymMatrix sample_covariance(const SampleMatrix& samples, std::span<const Index> columns);

/// Relative pivot threshold: a pivot <= kSpdTolerance * max_i A_ii is rejected.
inline constexpr double kSpdTolerance = 1e-12;

LowerTriangular cholesky_lower(const DenseSymMatrix& a);

/// Solves A X = B given the Cholesky factor of A.
Matrix cholesky_solve(const LowerTriangular& l, const Matrix& b);

DenseSymMatrix spd_inverse(const DenseSymMatrix& a);

/// Largest |eigenvalue|. Dense eigensolver up to kDenseEigenLimit, power
/// iteration above it.
double spectral_norm(const DenseSymMatrix& a);
inline constexpr Index kDenseEigenLimit = 512;

/// Largest singular value of a general (possibly rectangular) matrix.
double operator_norm(const Matrix& a);

double condition_number(const DenseSymMatrix& a);

/// Extreme eigenvalues {min, max} of a symmetric matrix.
std::pair<double, double> eigen_range(const DenseSymMatrix& a);

DenseSymMatrix spd_sqrt(const DenseSymMatrix& a);
DenseSymMatrix spd_inverse_sqrt(const DenseSymMatrix& a);

/// The four blocks of Sigma^{-1} for the partition {0..split-1} | {split..dim-1},
/// computed through Schur complements.
struct BlockInverse {
  Matrix top_left;
  Matrix top_right;
  Matrix bottom_left;
  Matrix bottom_right;

  Matrix assemble() const;
};

BlockInverse block_inverse_schur(const DenseSymMatrix& sigma, Index split);

/// A(rows, cols) with rows and cols taken in the given order.
Matrix submatrix(const Matrix& a, std::span<const Index> rows, std::span<const Index> cols);

/// ||estimate - truth|| / ||truth|| in the spectral norm.
double relative_spectral_error(const Matrix& estimate, const Matrix& truth);

}  // namespace gpprec

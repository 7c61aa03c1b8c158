#pragma once

// Independent reference implementations for tests. Deliberately naive: plain
// loops over std::vector, no Eigen decompositions.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracle {

using Mat = std::vector<std::vector<double>>;

inline Mat zeros(std::size_t n, std::size_t m) { return Mat(n, std::vector<double>(m, 0.0)); }

inline Mat identity(std::size_t n) {
  Mat a = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i) a[i][i] = 1.0;
  return a;
}

inline Mat multiply(const Mat& a, const Mat& b) {
  Mat c = zeros(a.size(), b[0].size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t j = 0; j < b[0].size(); ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

inline Mat transpose(const Mat& a) {
  Mat t = zeros(a[0].size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  return t;
}

// Cyclic Jacobi rotations. Returns eigenvalues ascending and, if requested,
// eigenvectors as columns of *vectors.
inline std::vector<double> jacobi_eigen(Mat a, Mat* vectors = nullptr) {
  const std::size_t n = a.size();
  Mat v = identity(n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) (i == j ? scale : off) += a[i][j] * a[i][j];
    if (off <= 1e-30 * std::max(scale, 1e-300)) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a[x][x] < a[y][y]; });
  std::vector<double> ev;
  Mat sorted = zeros(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    ev.push_back(a[order[k]][order[k]]);
    for (std::size_t i = 0; i < n; ++i) sorted[i][k] = v[i][order[k]];
  }
  if (vectors) *vectors = sorted;
  return ev;
}

// Spectral norm of a general matrix: sqrt of the top eigenvalue of A^T A.
inline double spectral_norm(const Mat& a) {
  const auto ev = jacobi_eigen(multiply(transpose(a), a));
  return std::sqrt(std::max(0.0, ev.back()));
}

// V diag(f(lambda)) V^T.
template <typename F>
inline Mat spectral_function(const Mat& a, F f) {
  Mat v;
  const auto ev = jacobi_eigen(a, &v);
  const std::size_t n = a.size();
  Mat out = zeros(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out[i][j] += v[i][k] * f(ev[k]) * v[j][k];
  return out;
}

// Gauss-Jordan with partial pivoting.
inline Mat gauss_jordan_inverse(Mat a) {
  const std::size_t n = a.size();
  Mat inv = identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (a[piv][c] == 0.0) throw std::runtime_error("singular");
    std::swap(a[c], a[piv]);
    std::swap(inv[c], inv[piv]);
    const double d = a[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      a[c][j] /= d;
      inv[c][j] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0.0) continue;
      const double f = a[r][c];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

// Row-by-row (Cholesky-Banachiewicz) factor; throws on a nonpositive pivot.
inline Mat cholesky_rows(const Mat& a) {
  const std::size_t n = a.size();
  Mat l = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = a[i][j];
      for (std::size_t k = 0; k < j; ++k) sum -= l[i][k] * l[j][k];
      if (i == j) {
        if (sum <= 0.0) throw std::runtime_error("not positive definite");
        l[i][i] = std::sqrt(sum);
      } else {
        l[i][j] = sum / l[j][j];
      }
    }
  }
  return l;
}

// Upper triangular U with U U^T = A, from the factor of the index-reversed A.
inline Mat upper_cholesky(const Mat& a) {
  const std::size_t n = a.size();
  Mat rev = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rev[i][j] = a[n - 1 - i][n - 1 - j];
  const Mat l = cholesky_rows(rev);
  Mat u = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) u[i][j] = l[n - 1 - i][n - 1 - j];
  return u;
}

}  // namespace oracle

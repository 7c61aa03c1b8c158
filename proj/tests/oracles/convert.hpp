#pragma once

#include "dense_oracles.hpp"
#include "gpprec/linalg.hpp"

namespace oracle {

inline Mat to_mat(const gpprec::Matrix& a) {
  Mat m = zeros(static_cast<std::size_t>(a.rows()), static_cast<std::size_t>(a.cols()));
  for (gpprec::Index i = 0; i < a.rows(); ++i)
    for (gpprec::Index j = 0; j < a.cols(); ++j) m[i][j] = a(i, j);
  return m;
}

inline gpprec::Matrix from_mat(const Mat& m) {
  gpprec::Matrix a(static_cast<gpprec::Index>(m.size()), static_cast<gpprec::Index>(m[0].size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[0].size(); ++j) a(i, j) = m[i][j];
  return a;
}

inline double rel_error(const gpprec::Matrix& est, const gpprec::Matrix& truth) {
  return spectral_norm(to_mat(est - truth)) / spectral_norm(to_mat(truth));
}

}  // namespace oracle

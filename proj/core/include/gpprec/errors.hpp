#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace gpprec {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A Cholesky pivot fell at or below the SPD tolerance. `pivot()` is the
/// zero-based row at which factorization stopped.
class NotPositiveDefinite : public Error {
 public:
  NotPositiveDefinite(std::size_t pivot, const std::string& context = {});
  std::size_t pivot() const noexcept { return pivot_; }

 private:
  std::size_t pivot_;
};

class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class CapacityExceeded : public Error {
 public:
  CapacityExceeded(std::size_t requested, std::size_t cap);
  std::size_t requested() const noexcept { return requested_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t requested_;
  std::size_t cap_;
};

/// The sample covariance of a local window W_{j,2} is not positive definite.
/// Usually means N is too small relative to |W_{j,2}|.
class LocalSingular : public Error {
 public:
  LocalSingular(std::size_t block, std::size_t window_size, std::size_t n_samples);
  std::size_t block() const noexcept { return block_; }
  std::size_t window_size() const noexcept { return window_size_; }
  std::size_t n_samples() const noexcept { return n_samples_; }

 private:
  std::size_t block_;
  std::size_t window_size_;
  std::size_t n_samples_;
};

/// No site-perfect matching exists. The witness is a set of sites whose
/// neighborhood is strictly smaller than the set (a Hall violation).
class NoMatching : public Error {
 public:
  NoMatching(std::vector<std::size_t> hall_set, std::vector<std::size_t> neighborhood);
  const std::vector<std::size_t>& hall_set() const noexcept { return hall_set_; }
  const std::vector<std::size_t>& neighborhood() const noexcept { return neighborhood_; }

 private:
  std::vector<std::size_t> hall_set_;
  std::vector<std::size_t> neighborhood_;
};

/// Wraps a failure that happened while estimating one level of the hierarchy.
class ScaleFailure : public Error {
 public:
  ScaleFailure(int scale, const std::string& what);
  int scale() const noexcept { return scale_; }

 private:
  int scale_;
};

}  // namespace gpprec

#pragma once

#include "gpprec/linalg.hpp"

#include <cstdint>

namespace gpprec {

// Counter-based generator: every draw is a pure function of
// (seed, stream, counter), so any subrange can be regenerated independently
// and results do not depend on the standard library.
std::uint64_t hash_counter(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) noexcept;

/// Uniform in (0, 1].
double uniform_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) noexcept;

/// Standard normal; consumes counters 2k and 2k+1 of the stream.
double normal_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t k) noexcept;

/// Sequential view over one stream.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {}

  double uniform() noexcept { return uniform_at(seed_, stream_, counter_++); }
  double normal() noexcept { return normal_at(seed_, stream_, normal_counter_++ + (1ull << 62)); }
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) noexcept;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::uint64_t normal_counter_ = 0;
};

/// rows x cols standard normals; entry (r, c) uses index r * cols + c.
Matrix standard_normal(Index rows, Index cols, std::uint64_t seed, std::uint64_t stream = 0);

}  // namespace gpprec

#include "gpprec/random.hpp"

#include <cmath>
#include <numbers>

namespace gpprec {

namespace {

std::uint64_t splitmix(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t hash_counter(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) noexcept {
  return splitmix(splitmix(splitmix(seed) ^ stream) ^ counter);
}

double uniform_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) noexcept {
  return (static_cast<double>(hash_counter(seed, stream, counter) >> 11) + 1.0) * 0x1.0p-53;
}

double normal_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t k) noexcept {
  const double u1 = uniform_at(seed, stream, 2 * k);
  const double u2 = uniform_at(seed, stream, 2 * k + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t CounterRng::below(std::uint64_t n) noexcept {
  if (n <= 1) return 0;
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t limit = ~0ull - (~0ull % n);
  for (;;) {
    const std::uint64_t x = hash_counter(seed_, stream_, counter_++);
    if (x < limit) return x % n;
  }
}

Matrix standard_normal(Index rows, Index cols, std::uint64_t seed, std::uint64_t stream) {
  Matrix out(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      out(r, c) = normal_at(seed, stream, static_cast<std::uint64_t>(r * cols + c));
    }
  }
  return out;
}

}  // namespace gpprec

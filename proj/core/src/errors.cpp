#include "gpprec/errors.hpp"

#include <utility>

namespace gpprec {

NotPositiveDefinite::NotPositiveDefinite(std::size_t pivot, const std::string& context)
    : Error("matrix is not positive definite (pivot " + std::to_string(pivot) + ")" +
            (context.empty() ? std::string{} : ": " + context)),
      pivot_(pivot) {}

CapacityExceeded::CapacityExceeded(std::size_t requested, std::size_t cap)
    : Error("requested size " + std::to_string(requested) + " exceeds cap " + std::to_string(cap)),
      requested_(requested),
      cap_(cap) {}

LocalSingular::LocalSingular(std::size_t block, std::size_t window_size, std::size_t n_samples)
    : Error("local covariance of block " + std::to_string(block) + " is singular (window " +
            std::to_string(window_size) + " vertices, N = " + std::to_string(n_samples) + ")"),
      block_(block),
      window_size_(window_size),
      n_samples_(n_samples) {}

NoMatching::NoMatching(std::vector<std::size_t> hall_set, std::vector<std::size_t> neighborhood)
    : Error("no site-perfect matching: " + std::to_string(hall_set.size()) +
            " sites share only " + std::to_string(neighborhood.size()) + " lattice points"),
      hall_set_(std::move(hall_set)),
      neighborhood_(std::move(neighborhood)) {}

ScaleFailure::ScaleFailure(int scale, const std::string& what)
    : Error("scale " + std::to_string(scale) + ": " + what), scale_(scale) {}

}  // namespace gpprec

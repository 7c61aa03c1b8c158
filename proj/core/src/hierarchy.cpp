#include "gpprec/hierarchy.hpp"

#include "gpprec/errors.hpp"
#include "gpprec/matrix_io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

namespace gpprec {

double boundary_distance(const Vector& x) {
  double best = std::numeric_limits<double>::infinity();
  for (Index a = 0; a < x.size(); ++a) best = std::min({best, x(a), 1.0 - x(a)});
  return best;
}

MaximinOrdering maximin_order(const Matrix& sites) {
  const Index m = sites.rows();
  if (m < 1) throw InvalidInput("maximin ordering of an empty cloud");
  std::vector<double> dist(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) dist[static_cast<std::size_t>(i)] = boundary_distance(sites.row(i).transpose());
  std::vector<char> taken(static_cast<std::size_t>(m), 0);

  MaximinOrdering out;
  out.perm.reserve(static_cast<std::size_t>(m));
  out.ell.reserve(static_cast<std::size_t>(m));
  for (Index step = 0; step < m; ++step) {
    Index pick = -1;
    for (Index i = 0; i < m; ++i) {
      if (taken[static_cast<std::size_t>(i)]) continue;
      // Strict comparison keeps the smallest index on ties.
      if (pick < 0 || dist[static_cast<std::size_t>(i)] > dist[static_cast<std::size_t>(pick)]) pick = i;
    }
    taken[static_cast<std::size_t>(pick)] = 1;
    out.perm.push_back(pick);
    out.ell.push_back(dist[static_cast<std::size_t>(pick)]);
    for (Index i = 0; i < m; ++i) {
      if (taken[static_cast<std::size_t>(i)]) continue;
      const double d = (sites.row(i) - sites.row(pick)).norm();
      dist[static_cast<std::size_t>(i)] = std::min(dist[static_cast<std::size_t>(i)], d);
    }
  }
  return out;
}

MaximinOrdering maximin_order(const SiteCloud& cloud) { return maximin_order(cloud.sites); }

LevelPartition::LevelPartition(std::vector<Index> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.empty()) throw InvalidInput("level partition needs at least one level");
  starts_.push_back(0);
  for (Index s : sizes_) {
    if (s < 1) throw InvalidInput("every level must hold at least one site");
    starts_.push_back(starts_.back() + s);
  }
}

Index LevelPartition::size(int k) const {
  if (k < 1 || k > q()) throw InvalidInput("level " + std::to_string(k) + " out of range");
  return sizes_[static_cast<std::size_t>(k - 1)];
}

Index LevelPartition::start(int k) const {
  if (k < 1 || k > q()) throw InvalidInput("level " + std::to_string(k) + " out of range");
  return starts_[static_cast<std::size_t>(k - 1)];
}

int LevelPartition::level_of(Index position) const {
  if (position < 0 || position >= total()) throw InvalidInput("position out of range");
  const auto it = std::upper_bound(starts_.begin(), starts_.end(), position);
  return static_cast<int>(it - starts_.begin());
}

LevelPartition assign_levels(const MaximinOrdering& ordering) {
  if (ordering.ell.empty()) throw InvalidInput("cannot assign levels to an empty ordering");
  const double scale0 = ordering.ell.front();
  if (!(scale0 > 0.0)) throw InvalidInput("maximin distances must be positive");
  std::vector<Index> sizes;
  int current = 0;
  for (double ell : ordering.ell) {
    if (!(ell > 0.0)) throw InvalidInput("maximin distances must be positive");
    // The slack keeps exact dyadic ratios on the lower level.
    const int k = static_cast<int>(std::floor(std::log2(scale0 / ell) + 1e-9)) + 1;
    if (k < current) throw InvalidInput("maximin distances are not nonincreasing");
    if (k > current) {
      // Skipped levels would be empty; they collapse onto the next one.
      sizes.push_back(0);
      current = k;
    }
    ++sizes.back();
  }
  return LevelPartition(std::move(sizes));
}

Vector scale_diagonal(const LevelPartition& levels, int d) {
  Vector out(levels.total());
  for (int k = 1; k <= levels.q(); ++k) {
    out.segment(levels.start(k), levels.size(k)).setConstant(std::pow(2.0, 0.5 * d * k));
  }
  return out;
}

void write_ordering(std::ostream& out, const MaximinOrdering& ordering, const LevelPartition& levels) {
  out << ordering.perm.size() << ' ' << levels.q() << '\n';
  for (std::size_t i = 0; i < ordering.perm.size(); ++i) {
    out << ordering.perm[i] << ' ' << levels.level_of(static_cast<Index>(i)) << ' '
        << format_double(ordering.ell[i]) << '\n';
  }
}

}  // namespace gpprec

#pragma once

#include "gpprec/linalg.hpp"
#include "gpprec/matching.hpp"

#include <iosfwd>
#include <vector>

namespace gpprec {

/// perm[i] is the original index of the i-th selected site; ell[i] is its
/// distance to the earlier sites and the boundary of [0,1]^d.
struct MaximinOrdering {
  std::vector<Index> perm;
  std::vector<double> ell;
};

double boundary_distance(const Vector& x);

/// Greedy maximin ordering; ties go to the smallest original index.
MaximinOrdering maximin_order(const Matrix& sites);
MaximinOrdering maximin_order(const SiteCloud& cloud);

/// Levels J^(1..q) of a maximin ordering with h = 1/2. Positions refer to the
/// maximin order; level k occupies [start(k), start(k+1)).
class LevelPartition {
 public:
  LevelPartition() = default;
  /// From the sizes |J^(1)|, ..., |J^(q)|, all positive.
  explicit LevelPartition(std::vector<Index> sizes);

  int q() const noexcept { return static_cast<int>(sizes_.size()); }
  Index total() const noexcept { return starts_.empty() ? 0 : starts_.back(); }
  /// |J^(k)|, k is 1-based.
  Index size(int k) const;
  Index start(int k) const;
  /// |I^(k)| = |J^(1)| + ... + |J^(k)|.
  Index prefix(int k) const { return start(k) + size(k); }
  int level_of(Index position) const;
  const std::vector<Index>& sizes() const noexcept { return sizes_; }

  static constexpr double h = 0.5;

 private:
  std::vector<Index> sizes_;
  std::vector<Index> starts_;
};

/// Level k = floor(log2(ell[0] / ell[i])) + 1, so each level halves the
/// maximin distance; q is the level of the last site.
LevelPartition assign_levels(const MaximinOrdering& ordering);

/// Entries 2^(d k / 2) for a site at level k.
Vector scale_diagonal(const LevelPartition& levels, int d);

void write_ordering(std::ostream& out, const MaximinOrdering& ordering, const LevelPartition& levels);

}  // namespace gpprec

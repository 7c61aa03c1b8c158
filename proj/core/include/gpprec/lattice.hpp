#pragma once

#include "gpprec/linalg.hpp"

#include <array>
#include <vector>

namespace gpprec {

/// Dense matrices are capped at this many rows (about 0.5 GB of doubles).
inline constexpr Index kMaxVertices = 8192;

/// Lattice coordinates; only the first d entries are meaningful.
using Coord = std::array<Index, 3>;

/// The lattice [p]^d with flat index in lexicographic coordinate order,
/// last axis fastest. Coordinates and flat indices are zero-based.
class LatticeShape {
 public:
  LatticeShape() = default;
  LatticeShape(Index p, int d);

  Index p() const noexcept { return p_; }
  int d() const noexcept { return d_; }
  Index size() const noexcept { return size_; }

  Coord coord(Index flat) const;
  Index flat(const Coord& c) const;

 private:
  Index p_ = 1;
  int d_ = 1;
  Index size_ = 1;
};

/// Index bookkeeping for the neighborhood of one block.
struct Neighborhood {
  std::vector<Index> blocks;    // N_{j,lambda}, sorted block ids
  std::vector<Index> vertices;  // W_{j,lambda}, sorted flat indices
};

/// Partition of the lattice into b-wide blocks. Block j along an axis covers
/// coordinates [j*b, min((j+1)*b, p)), so only the last block may be short.
class BlockScheme {
 public:
  BlockScheme() = default;
  BlockScheme(const LatticeShape& shape, Index b);

  const LatticeShape& shape() const noexcept { return shape_; }
  Index b() const noexcept { return b_; }
  Index blocks_per_axis() const noexcept { return s_; }
  Index block_count() const noexcept { return grid_.size(); }

  /// The block grid [S]^d, flattened the same way as the lattice.
  const LatticeShape& grid() const noexcept { return grid_; }

  /// Sorted vertices of block j.
  const std::vector<Index>& vertices(Index j) const;
  Index block_of(Index vertex) const;

  Neighborhood neighborhood(Index j, Index lambda) const;

  /// ||j - j'||_inf between block ids.
  Index block_distance(Index j, Index jp) const;

 private:
  LatticeShape shape_;
  Index b_ = 1;
  Index s_ = 1;
  LatticeShape grid_;
  std::vector<std::vector<Index>> members_;
};

BlockScheme build_scheme(Index p, Index b, int d);

/// A restricted to rows x cols, with both vertex sets taken in sorted order.
Matrix restrict(const DenseSymMatrix& a, std::vector<Index> rows, std::vector<Index> cols);

}  // namespace gpprec

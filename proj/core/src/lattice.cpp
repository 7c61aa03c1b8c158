#include "gpprec/lattice.hpp"

#include "gpprec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gpprec {

LatticeShape::LatticeShape(Index p, int d) : p_(p), d_(d) {
  if (d < 1 || d > 3) throw InvalidInput("lattice dimension d must be 1, 2 or 3, got " + std::to_string(d));
  if (p < 1) throw InvalidInput("lattice side p must be >= 1, got " + std::to_string(p));
  constexpr Index limit = Index{1} << 40;
  const double requested = std::pow(static_cast<double>(p), d);
  if (requested > static_cast<double>(limit)) {
    throw CapacityExceeded(static_cast<std::size_t>(requested), static_cast<std::size_t>(limit));
  }
  size_ = 1;
  for (int a = 0; a < d; ++a) size_ *= p;
}

Coord LatticeShape::coord(Index flat) const {
  if (flat < 0 || flat >= size_) throw InvalidInput("lattice vertex " + std::to_string(flat) + " out of range");
  Coord c{0, 0, 0};
  for (int a = d_ - 1; a >= 0; --a) {
    c[a] = flat % p_;
    flat /= p_;
  }
  return c;
}

Index LatticeShape::flat(const Coord& c) const {
  Index f = 0;
  for (int a = 0; a < d_; ++a) {
    if (c[a] < 0 || c[a] >= p_) throw InvalidInput("lattice coordinate out of range");
    f = f * p_ + c[a];
  }
  return f;
}

BlockScheme::BlockScheme(const LatticeShape& shape, Index b) : shape_(shape), b_(b) {
  if (b < 1 || b > shape.p()) {
    throw InvalidInput("block width b must satisfy 1 <= b <= p (b=" + std::to_string(b) +
                       ", p=" + std::to_string(shape.p()) + ")");
  }
  s_ = (shape.p() + b - 1) / b;
  grid_ = LatticeShape(s_, shape.d());
  members_.assign(static_cast<std::size_t>(grid_.size()), {});
  // Flat order visits vertices sorted, so each member list comes out sorted.
  for (Index v = 0; v < shape.size(); ++v) members_[static_cast<std::size_t>(block_of(v))].push_back(v);
}

const std::vector<Index>& BlockScheme::vertices(Index j) const {
  if (j < 0 || j >= block_count()) throw InvalidInput("block index " + std::to_string(j) + " out of range");
  return members_[static_cast<std::size_t>(j)];
}

Index BlockScheme::block_of(Index vertex) const {
  Coord c = shape_.coord(vertex);
  for (int a = 0; a < shape_.d(); ++a) c[a] /= b_;
  return grid_.flat(c);
}

Index BlockScheme::block_distance(Index j, Index jp) const {
  const Coord a = grid_.coord(j);
  const Coord c = grid_.coord(jp);
  Index dist = 0;
  for (int k = 0; k < shape_.d(); ++k) dist = std::max(dist, std::abs(a[k] - c[k]));
  return dist;
}

Neighborhood BlockScheme::neighborhood(Index j, Index lambda) const {
  if (lambda < 0) throw InvalidInput("neighborhood radius must be >= 0");
  const Coord center = grid_.coord(j);
  Coord lo{0, 0, 0}, hi{0, 0, 0};
  for (int a = 0; a < shape_.d(); ++a) {
    lo[a] = std::max<Index>(0, center[a] - lambda);
    hi[a] = std::min<Index>(s_ - 1, center[a] + lambda);
  }
  Neighborhood out;
  Coord c = lo;
  for (;;) {
    out.blocks.push_back(grid_.flat(c));
    int a = shape_.d() - 1;
    while (a >= 0 && c[a] == hi[a]) {
      c[a] = lo[a];
      --a;
    }
    if (a < 0) break;
    ++c[a];
  }
  for (Index blk : out.blocks) {
    const auto& m = members_[static_cast<std::size_t>(blk)];
    out.vertices.insert(out.vertices.end(), m.begin(), m.end());
  }
  std::sort(out.vertices.begin(), out.vertices.end());
  return out;
}

BlockScheme build_scheme(Index p, Index b, int d) { return BlockScheme(LatticeShape(p, d), b); }

Matrix restrict(const DenseSymMatrix& a, std::vector<Index> rows, std::vector<Index> cols) {
  std::sort(rows.begin(), rows.end());
  std::sort(cols.begin(), cols.end());
  return submatrix(a.matrix(), rows, cols);
}

}  // namespace gpprec

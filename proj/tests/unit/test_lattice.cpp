#include "gpprec/errors.hpp"
#include "gpprec/lattice.hpp"
#include "gpprec/random.hpp"

#include "../oracles/combinatorial_oracles.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace gpprec;

TEST(LatticeShape, FlatCoordBijection) {
  for (int d = 1; d <= 3; ++d) {
    const LatticeShape shape(5, d);
    for (Index v = 0; v < shape.size(); ++v) EXPECT_EQ(shape.flat(shape.coord(v)), v);
  }
  const LatticeShape s2(4, 2);
  EXPECT_EQ(s2.flat({1, 2, 0}), 6);  // last axis fastest
  EXPECT_THROW(LatticeShape(0, 1), InvalidInput);
  EXPECT_THROW(LatticeShape(3, 4), InvalidInput);
}

TEST(BuildScheme, ShortLastInterval) {
  const BlockScheme s = build_scheme(5, 2, 1);
  EXPECT_EQ(s.blocks_per_axis(), 3);
  EXPECT_EQ(s.vertices(0), (std::vector<Index>{0, 1}));
  EXPECT_EQ(s.vertices(1), (std::vector<Index>{2, 3}));
  EXPECT_EQ(s.vertices(2), (std::vector<Index>{4}));
}

TEST(BuildScheme, SingleBlock) {
  const BlockScheme s = build_scheme(4, 4, 2);
  EXPECT_EQ(s.block_count(), 1);
  EXPECT_EQ(s.vertices(0).size(), 16u);
}

TEST(BuildScheme, NineBlocksOfFour) {
  const BlockScheme s = build_scheme(6, 2, 2);
  ASSERT_EQ(s.block_count(), 9);
  std::set<Index> all;
  for (Index j = 0; j < 9; ++j) {
    EXPECT_EQ(s.vertices(j).size(), 4u);
    all.insert(s.vertices(j).begin(), s.vertices(j).end());
  }
  EXPECT_EQ(all.size(), 36u);
}

TEST(BuildScheme, RejectsBadWidth) {
  EXPECT_THROW(build_scheme(5, 6, 1), InvalidInput);
  EXPECT_THROW(build_scheme(5, 0, 1), InvalidInput);
}

TEST(BuildScheme, MatchesExhaustiveEnumeration) {
  CounterRng rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 1 + static_cast<int>(rng.below(3));
    const Index p = 1 + static_cast<Index>(rng.below(d == 3 ? 7 : 13));
    const Index b = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(p)));
    const BlockScheme s = build_scheme(p, b, d);
    const auto ref = oracle::product_blocks(p, b, d);
    ASSERT_EQ(static_cast<std::size_t>(s.block_count()), ref.size());
    Index total = 0;
    for (Index j = 0; j < s.block_count(); ++j) {
      const auto& v = s.vertices(j);
      EXPECT_EQ(std::vector<long>(v.begin(), v.end()), ref[static_cast<std::size_t>(j)]);
      EXPECT_GE(v.size(), 1u);
      total += static_cast<Index>(v.size());
    }
    EXPECT_EQ(total, s.shape().size());
  }
}

TEST(Neighborhood, ClippedAtBoundary) {
  const BlockScheme s = build_scheme(5, 2, 1);
  const Neighborhood n = s.neighborhood(0, 1);
  EXPECT_EQ(n.blocks, (std::vector<Index>{0, 1}));
  EXPECT_EQ(n.vertices, (std::vector<Index>{0, 1, 2, 3}));
}

TEST(Neighborhood, FullWindowAndIdentity) {
  const BlockScheme s = build_scheme(10, 2, 2);  // S = 5
  EXPECT_EQ(s.neighborhood(s.grid().flat({2, 2, 0}), 2).blocks.size(), 25u);
  for (Index j = 0; j < s.block_count(); ++j) {
    const Neighborhood n = s.neighborhood(j, 0);
    EXPECT_EQ(n.blocks, std::vector<Index>{j});
    EXPECT_EQ(n.vertices, s.vertices(j));
  }
  EXPECT_THROW(s.neighborhood(25, 1), InvalidInput);
}

TEST(Neighborhood, MonotoneAndBounded) {
  const BlockScheme s = build_scheme(9, 2, 2);
  for (Index j = 0; j < s.block_count(); ++j) {
    for (Index lambda = 0; lambda < 3; ++lambda) {
      const auto small = s.neighborhood(j, lambda);
      const auto big = s.neighborhood(j, lambda + 1);
      EXPECT_TRUE(std::includes(big.vertices.begin(), big.vertices.end(), small.vertices.begin(), small.vertices.end()));
      EXPECT_LE(small.blocks.size(), static_cast<std::size_t>((2 * lambda + 1) * (2 * lambda + 1)));
    }
  }
}

TEST(Restrict, Examples) {
  Matrix a(4, 4);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 4; ++j) a(i, j) = static_cast<double>((i + 1) + (j + 1));
  const DenseSymMatrix sym(a);
  // One-based rows {1,3}, col {2} are zero-based {0,2}, {1}.
  const Matrix r = restrict(sym, {2, 0}, {1});
  EXPECT_EQ(r(0, 0), 3.0);
  EXPECT_EQ(r(1, 0), 5.0);
  EXPECT_TRUE(restrict(DenseSymMatrix::identity(6), {1, 4, 5}, {1, 4, 5}).isIdentity(0.0));
  EXPECT_TRUE(restrict(sym, {0, 1, 2, 3}, {0, 1, 2, 3}) == sym.matrix());
  EXPECT_THROW(restrict(sym, {4}, {0}), InvalidInput);
}

TEST(Restrict, Composes) {
  const DenseSymMatrix a(standard_normal(8, 8, 4));
  const std::vector<Index> rows{0, 2, 3, 5, 7}, cols{1, 2, 6};
  const Matrix inner = restrict(a, rows, cols);
  // Positions of {2, 5} inside rows and {6} inside cols.
  const Matrix twice = submatrix(inner, std::vector<Index>{1, 3}, std::vector<Index>{2});
  EXPECT_TRUE(twice == restrict(a, {2, 5}, {6}));
}

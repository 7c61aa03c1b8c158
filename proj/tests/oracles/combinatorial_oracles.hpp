#pragma once

// Exhaustive references for the matching and partition code.

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

namespace oracle {

// Maximum matching size by the deficiency form of Hall's theorem:
// nu = |L| - max over S of (|S| - |N(S)|). Exponential in |L|.
inline int brute_max_matching(const std::vector<std::vector<long>>& adj) {
  const int m = static_cast<int>(adj.size());
  int worst = 0;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    std::set<long> nbrs;
    int size = 0;
    for (int i = 0; i < m; ++i) {
      if (mask & (1u << i)) {
        ++size;
        nbrs.insert(adj[i].begin(), adj[i].end());
      }
    }
    worst = std::max(worst, size - static_cast<int>(nbrs.size()));
  }
  return m - worst;
}

// One-based intervals I_1..I_S of [1..p] with width b, last one short.
inline std::vector<std::vector<long>> intervals(long p, long b) {
  std::vector<std::vector<long>> out;
  const long s = (p + b - 1) / b;
  for (long j = 1; j <= s; ++j) {
    std::vector<long> iv;
    const long hi = j < s ? j * b : p;
    for (long t = (j - 1) * b + 1; t <= hi; ++t) iv.push_back(t);
    out.push_back(iv);
  }
  return out;
}

// Blocks B_j = I_{j1} x ... x I_{jd} as zero-based flat vertex lists
// (lexicographic, last axis fastest), indexed by the flattened block grid.
inline std::vector<std::vector<long>> product_blocks(long p, long b, int d) {
  const auto iv = intervals(p, b);
  const long s = static_cast<long>(iv.size());
  long count = 1;
  for (int a = 0; a < d; ++a) count *= s;
  std::vector<std::vector<long>> blocks;
  for (long j = 0; j < count; ++j) {
    std::vector<long> jc(d);
    long rest = j;
    for (int a = d - 1; a >= 0; --a) {
      jc[a] = rest % s;
      rest /= s;
    }
    std::vector<std::vector<long>> coords{{}};
    for (int a = 0; a < d; ++a) {
      std::vector<std::vector<long>> next;
      for (const auto& c : coords) {
        for (long t : iv[jc[a]]) {
          auto e = c;
          e.push_back(t - 1);
          next.push_back(e);
        }
      }
      coords = next;
    }
    std::vector<long> flat;
    for (const auto& c : coords) {
      long f = 0;
      for (int a = 0; a < d; ++a) f = f * p + c[a];
      flat.push_back(f);
    }
    std::sort(flat.begin(), flat.end());
    blocks.push_back(flat);
  }
  return blocks;
}

}  // namespace oracle

#include "gpprec/matching.hpp"

#include "gpprec/errors.hpp"
#include "gpprec/random.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <queue>
#include <string>

#include "gpprec/matrix_io.hpp"

namespace gpprec {

namespace {

constexpr std::uint64_t kPaddingStream = 0x70616464;  // "padd"
constexpr Index kFree = -1;

double boundary_clearance(const Matrix& sites, Index i) {
  double best = std::numeric_limits<double>::infinity();
  for (Index a = 0; a < sites.cols(); ++a) best = std::min({best, sites(i, a), 1.0 - sites(i, a)});
  return best;
}

// Hopcroft-Karp on sites (left) and lattice vertices (right). Adjacency lists
// are sorted, which makes the result deterministic.
class HopcroftKarp {
 public:
  HopcroftKarp(const std::vector<std::vector<Index>>& adj, Index right_size)
      : adj_(adj), pair_left_(adj.size(), kFree), pair_right_(static_cast<std::size_t>(right_size), kFree),
        dist_(adj.size()) {}

  Index run() {
    Index size = 0;
    while (bfs()) {
      for (std::size_t u = 0; u < adj_.size(); ++u) {
        if (pair_left_[u] == kFree && dfs(static_cast<Index>(u))) ++size;
      }
    }
    return size;
  }

  Index left_mate(Index u) const { return pair_left_[static_cast<std::size_t>(u)]; }

  // Alternating-path closure from the unmatched sites. Its neighborhood is
  // fully matched back into it, so it violates Hall's condition.
  std::pair<std::vector<std::size_t>, std::vector<std::size_t>> hall_witness() const {
    std::vector<char> seen_left(adj_.size(), 0), seen_right(pair_right_.size(), 0);
    std::queue<Index> queue;
    for (std::size_t u = 0; u < adj_.size(); ++u) {
      if (pair_left_[u] == kFree) {
        seen_left[u] = 1;
        queue.push(static_cast<Index>(u));
      }
    }
    while (!queue.empty()) {
      const Index u = queue.front();
      queue.pop();
      for (Index v : adj_[static_cast<std::size_t>(u)]) {
        if (seen_right[static_cast<std::size_t>(v)]) continue;
        seen_right[static_cast<std::size_t>(v)] = 1;
        const Index w = pair_right_[static_cast<std::size_t>(v)];
        if (w != kFree && !seen_left[static_cast<std::size_t>(w)]) {
          seen_left[static_cast<std::size_t>(w)] = 1;
          queue.push(w);
        }
      }
    }
    std::vector<std::size_t> sites, nbrs;
    for (std::size_t u = 0; u < seen_left.size(); ++u) {
      if (seen_left[u]) sites.push_back(u);
    }
    for (std::size_t v = 0; v < seen_right.size(); ++v) {
      if (seen_right[v]) nbrs.push_back(v);
    }
    return {sites, nbrs};
  }

 private:
  bool bfs() {
    std::queue<Index> queue;
    bool found = false;
    for (std::size_t u = 0; u < adj_.size(); ++u) {
      if (pair_left_[u] == kFree) {
        dist_[u] = 0;
        queue.push(static_cast<Index>(u));
      } else {
        dist_[u] = kInf;
      }
    }
    while (!queue.empty()) {
      const Index u = queue.front();
      queue.pop();
      for (Index v : adj_[static_cast<std::size_t>(u)]) {
        const Index w = pair_right_[static_cast<std::size_t>(v)];
        if (w == kFree) {
          found = true;
        } else if (dist_[static_cast<std::size_t>(w)] == kInf) {
          dist_[static_cast<std::size_t>(w)] = dist_[static_cast<std::size_t>(u)] + 1;
          queue.push(w);
        }
      }
    }
    return found;
  }

  bool dfs(Index u) {
    for (Index v : adj_[static_cast<std::size_t>(u)]) {
      const Index w = pair_right_[static_cast<std::size_t>(v)];
      if (w == kFree || (dist_[static_cast<std::size_t>(w)] == dist_[static_cast<std::size_t>(u)] + 1 && dfs(w))) {
        pair_left_[static_cast<std::size_t>(u)] = v;
        pair_right_[static_cast<std::size_t>(v)] = u;
        return true;
      }
    }
    dist_[static_cast<std::size_t>(u)] = kInf;
    return false;
  }

  static constexpr Index kInf = std::numeric_limits<Index>::max();
  const std::vector<std::vector<Index>>& adj_;
  std::vector<Index> pair_left_;
  std::vector<Index> pair_right_;
  std::vector<Index> dist_;
};

std::vector<std::vector<Index>> radius_graph(const SiteCloud& cloud, const TargetLattice& lattice, double radius) {
  const LatticeShape& shape = lattice.shape;
  const Index p = shape.p();
  const int d = shape.d();
  const double scale = static_cast<double>(p + 1);
  const double r2 = radius * radius * (1.0 + 1e-12);
  std::vector<std::vector<Index>> adj(static_cast<std::size_t>(cloud.size()));
  for (Index i = 0; i < cloud.size(); ++i) {
    Coord lo{0, 0, 0}, hi{0, 0, 0};
    bool empty = false;
    for (int a = 0; a < d; ++a) {
      const double x = cloud.sites(i, a);
      lo[a] = std::max<Index>(0, static_cast<Index>(std::floor((x - radius) * scale)) - 1);
      hi[a] = std::min<Index>(p - 1, static_cast<Index>(std::ceil((x + radius) * scale)));
      if (lo[a] > hi[a]) empty = true;
    }
    if (empty) continue;
    Coord c = lo;
    for (;;) {
      double dist2 = 0.0;
      for (int a = 0; a < d; ++a) {
        const double diff = cloud.sites(i, a) - static_cast<double>(c[a] + 1) / scale;
        dist2 += diff * diff;
      }
      if (dist2 <= r2) adj[static_cast<std::size_t>(i)].push_back(shape.flat(c));
      int a = d - 1;
      while (a >= 0 && c[a] == hi[a]) {
        c[a] = lo[a];
        --a;
      }
      if (a < 0) break;
      ++c[a];
    }
  }
  return adj;
}

}  // namespace

SiteCloud measure_cloud(const Matrix& sites) {
  const Index m = sites.rows();
  const int d = static_cast<int>(sites.cols());
  if (m < 1) throw InvalidInput("site cloud is empty");
  if (d < 1 || d > 3) throw InvalidInput("site dimension must be 1, 2 or 3");
  for (Index i = 0; i < m; ++i) {
    for (int a = 0; a < d; ++a) {
      const double x = sites(i, a);
      if (!(x > 0.0 && x < 1.0)) throw InvalidInput("site " + std::to_string(i) + " is not inside (0,1)^d");
    }
  }

  double min_pair = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < m; ++i) {
    for (Index j = i + 1; j < m; ++j) {
      const double dist = (sites.row(i) - sites.row(j)).norm();
      if (dist == 0.0) {
        throw InvalidInput("duplicate sites " + std::to_string(i) + " and " + std::to_string(j));
      }
      min_pair = std::min(min_pair, dist);
    }
  }
  double min_clear = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < m; ++i) min_clear = std::min(min_clear, boundary_clearance(sites, i));

  const auto per_axis = std::max<Index>(
      2, static_cast<Index>(std::ceil(std::pow(64.0 * static_cast<double>(m), 1.0 / d))));
  Index total = 1;
  for (int a = 0; a < d; ++a) total *= per_axis;
  double fill = 0.0;
  Vector x(d);
  for (Index g = 0; g < total; ++g) {
    Index rest = g;
    for (int a = d - 1; a >= 0; --a) {
      x(a) = static_cast<double>(rest % per_axis) / static_cast<double>(per_axis - 1);
      rest /= per_axis;
    }
    double nearest = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < m; ++i) nearest = std::min(nearest, (sites.row(i).transpose() - x).squaredNorm());
    fill = std::max(fill, nearest);
  }

  SiteCloud cloud;
  cloud.d = d;
  cloud.sites = sites;
  cloud.h = std::sqrt(fill);
  cloud.delta = std::min(1.0, std::min(min_pair, min_clear) / cloud.h);
  return cloud;
}

void write_cloud(std::ostream& out, const SiteCloud& cloud) {
  out << cloud.d << ' ' << cloud.size() << '\n';
  write_rows(out, cloud.sites);
}

SiteCloud read_cloud(std::istream& in) {
  skip_comments(in);
  Index d = 0, m = 0;
  if (!(in >> d >> m) || d < 1 || m < 1) throw InvalidInput("cloud header must be 'd M'");
  return measure_cloud(read_rows(in, m, d));
}

TargetLattice lattice_points(const LatticeShape& shape) {
  TargetLattice out;
  out.shape = shape;
  out.points.resize(shape.size(), shape.d());
  const double scale = static_cast<double>(shape.p() + 1);
  for (Index t = 0; t < shape.size(); ++t) {
    const Coord c = shape.coord(t);
    for (int a = 0; a < shape.d(); ++a) out.points(t, a) = static_cast<double>(c[a] + 1) / scale;
  }
  return out;
}

TargetLattice build_target_lattice(const SiteCloud& cloud, double c1, Index cap) {
  if (!(c1 > 0.0 && c1 <= 1.0)) throw InvalidInput("c1 must lie in (0,1]");
  if (!(cloud.h > 0.0)) throw InvalidInput("cloud has no measured fill distance");
  const double raw = 1.0 / (c1 * cloud.h);
  const double p = std::max(1.0, std::ceil(raw - 1e-9 * raw));
  const double vertices = std::pow(p, cloud.d);
  if (vertices > static_cast<double>(cap)) {
    throw CapacityExceeded(static_cast<std::size_t>(vertices), static_cast<std::size_t>(cap));
  }
  return lattice_points(LatticeShape(static_cast<Index>(p), cloud.d));
}

Index maximum_matching_size(const std::vector<std::vector<Index>>& adjacency, Index right_size) {
  HopcroftKarp hk(adjacency, right_size);
  return hk.run();
}

LatticeEmbedding perfect_matching(const SiteCloud& cloud, const TargetLattice& lattice, double radius) {
  if (!(radius >= 0.0)) throw InvalidInput("matching radius must be nonnegative");
  if (cloud.d != lattice.shape.d()) throw InvalidInput("cloud and lattice dimensions differ");
  const auto adj = radius_graph(cloud, lattice, radius);
  HopcroftKarp hk(adj, lattice.shape.size());
  const Index size = hk.run();
  if (size < cloud.size()) {
    auto [sites, nbrs] = hk.hall_witness();
    throw NoMatching(std::move(sites), std::move(nbrs));
  }

  LatticeEmbedding out;
  out.p = lattice.shape.p();
  out.vertex_of.resize(static_cast<std::size_t>(cloud.size()));
  std::vector<std::pair<Index, Index>> pairs;
  for (Index i = 0; i < cloud.size(); ++i) {
    const Index v = hk.left_mate(i);
    out.vertex_of[static_cast<std::size_t>(i)] = v;
    pairs.emplace_back(v, i);
    out.displacement = std::max(out.displacement, (cloud.sites.row(i) - lattice.points.row(v)).norm());
  }
  std::sort(pairs.begin(), pairs.end());
  for (const auto& [v, i] : pairs) {
    out.matched.push_back(v);
    out.site_of.push_back(i);
  }
  return out;
}

DenseSymMatrix padded_precision(const DenseSymMatrix& omega, const LatticeEmbedding& embedding,
                                const LatticeShape& shape) {
  if (omega.dim() != static_cast<Index>(embedding.vertex_of.size())) {
    throw InvalidInput("precision dim does not match the number of embedded sites");
  }
  Matrix bar = Matrix::Identity(shape.size(), shape.size());
  for (std::size_t a = 0; a < embedding.matched.size(); ++a) {
    bar(embedding.matched[a], embedding.matched[a]) = 0.0;
  }
  for (Index i = 0; i < omega.dim(); ++i) {
    for (Index j = 0; j < omega.dim(); ++j) {
      bar(embedding.vertex_of[static_cast<std::size_t>(i)], embedding.vertex_of[static_cast<std::size_t>(j)]) =
          omega(i, j);
    }
  }
  return DenseSymMatrix(bar);
}

std::pair<TargetLattice, LatticeEmbedding> embed_cloud(const SiteCloud& cloud, const ScatterConfig& scatter,
                                                       double* c1_used) {
  double c1 = scatter.c1;
  for (int attempt = 0;; ++attempt) {
    TargetLattice lattice = build_target_lattice(cloud, c1, scatter.capacity);
    try {
      LatticeEmbedding embedding = perfect_matching(cloud, lattice, cloud.h);
      if (c1_used) *c1_used = c1;
      return {std::move(lattice), std::move(embedding)};
    } catch (const NoMatching&) {
      if (attempt >= scatter.max_retries) throw;
    }
    c1 *= 0.5;
  }
}

ScatteredEstimate embed_and_estimate(const CovarianceSource& source, const SiteCloud& cloud,
                                     const EstimatorConfig& config, std::uint64_t seed,
                                     const ScatterConfig& scatter) {
  if (source.dim() != cloud.size()) throw InvalidInput("sample dim does not equal the number of sites");
  ScatteredEstimate out;
  out.seed = seed;
  auto [lattice, embedding] = embed_cloud(cloud, scatter, &out.c1_used);
  const LatticeShape& shape = lattice.shape;
  const Index big = shape.size();

  CovarianceSource padded;
  if (source.is_population()) {
    const Matrix& sigma = source.population().matrix();
    Matrix bar = Matrix::Identity(big, big);
    for (Index i = 0; i < cloud.size(); ++i) {
      const Index vi = embedding.vertex_of[static_cast<std::size_t>(i)];
      bar(vi, vi) = 0.0;
    }
    for (Index i = 0; i < cloud.size(); ++i) {
      for (Index j = 0; j < cloud.size(); ++j) {
        bar(embedding.vertex_of[static_cast<std::size_t>(i)], embedding.vertex_of[static_cast<std::size_t>(j)]) =
            sigma(i, j);
      }
    }
    padded = CovarianceSource::from_population(DenseSymMatrix(bar));
  } else {
    const Matrix& z = source.samples().rows();
    const Index n = z.rows();
    Matrix bar(n, big);
    std::vector<char> on_site(static_cast<std::size_t>(big), 0);
    for (Index v : embedding.matched) on_site[static_cast<std::size_t>(v)] = 1;
    for (Index r = 0; r < n; ++r) {
      for (Index t = 0; t < big; ++t) {
        if (!on_site[static_cast<std::size_t>(t)]) {
          bar(r, t) = normal_at(seed, kPaddingStream, static_cast<std::uint64_t>(r * big + t));
        }
      }
    }
    for (Index i = 0; i < cloud.size(); ++i) bar.col(embedding.vertex_of[static_cast<std::size_t>(i)]) = z.col(i);
    padded = CovarianceSource::from_samples(SampleMatrix(std::move(bar)));
  }

  EstimatorConfig lattice_config = config;
  if (lattice_config.b_override) lattice_config.b_override = std::min(*lattice_config.b_override, shape.p());
  const PrecisionEstimate est = estimate_precision(padded, shape, lattice_config);

  out.omega = DenseSymMatrix(submatrix(est.matrix.matrix(), embedding.vertex_of, embedding.vertex_of));
  out.embedding = std::move(embedding);
  out.shape = shape;
  out.b = est.scheme.b();
  out.path = est.path;
  return out;
}

ScatteredEstimate embed_and_estimate(const SampleMatrix& samples, const SiteCloud& cloud,
                                     const EstimatorConfig& config, std::uint64_t seed,
                                     const ScatterConfig& scatter) {
  return embed_and_estimate(CovarianceSource::from_samples(samples), cloud, config, seed, scatter);
}

}  // namespace gpprec

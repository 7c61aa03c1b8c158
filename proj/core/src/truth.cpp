#include "gpprec/truth.hpp"

#include "gpprec/errors.hpp"
#include "gpprec/matrix_io.hpp"
#include "gpprec/random.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace gpprec {

namespace {

Eigen::SparseMatrix<double> sparse_laplacian(Index p, int d) {
  const LatticeShape shape(p, d);
  const double scale = static_cast<double>((p + 1) * (p + 1));
  std::vector<Eigen::Triplet<double>> triplets;
  for (Index v = 0; v < shape.size(); ++v) {
    triplets.emplace_back(v, v, 2.0 * d * scale);
    const Coord c = shape.coord(v);
    for (int a = 0; a < d; ++a) {
      for (Index step : {Index{-1}, Index{1}}) {
        Coord n = c;
        n[a] += step;
        if (n[a] < 0 || n[a] >= p) continue;
        triplets.emplace_back(v, shape.flat(n), -scale);
      }
    }
  }
  Eigen::SparseMatrix<double> a(shape.size(), shape.size());
  a.setFromTriplets(triplets.begin(), triplets.end());
  return a;
}

Eigen::SparseMatrix<double> sparse_precision(Index p, int d, int s) {
  const Eigen::SparseMatrix<double> a = sparse_laplacian(p, d);
  Eigen::SparseMatrix<double> omega = a;
  for (int i = 1; i < s; ++i) omega = Eigen::SparseMatrix<double>(omega * a);
  omega *= std::pow(1.0 / static_cast<double>(p + 1), d);
  return omega;
}

void check_cap(Index p, int d, Index cap) {
  const double vertices = std::pow(static_cast<double>(p), d);
  if (vertices > static_cast<double>(cap)) {
    throw CapacityExceeded(static_cast<std::size_t>(vertices), static_cast<std::size_t>(cap));
  }
}

double matern(double r, double nu, double rho, double sigma2) {
  if (nu == 0.5) return sigma2 * std::exp(-r / rho);
  if (nu == 1.5) {
    const double t = std::sqrt(3.0) * r / rho;
    return sigma2 * (1.0 + t) * std::exp(-t);
  }
  const double t = std::sqrt(5.0) * r / rho;
  return sigma2 * (1.0 + t + t * t / 3.0) * std::exp(-t);
}

std::string fmt(double v) { return format_double(v); }

}  // namespace

const char* to_string(ModelTag tag) noexcept {
  switch (tag) {
    case ModelTag::laplacian_power:
      return "laplacian_power";
    case ModelTag::green_restriction:
      return "green_restriction";
    case ModelTag::matern:
      return "matern";
  }
  return "unknown";
}

int GroundTruth::d() const {
  if (const auto* shape = std::get_if<LatticeShape>(&geometry)) return shape->d();
  return std::get<SiteCloud>(geometry).d;
}

double GroundTruth::mesh() const {
  if (const auto* shape = std::get_if<LatticeShape>(&geometry)) return 1.0 / static_cast<double>(shape->p() + 1);
  return std::get<SiteCloud>(geometry).h;
}

Matrix GroundTruth::coordinates() const {
  if (const auto* shape = std::get_if<LatticeShape>(&geometry)) return lattice_points(*shape).points;
  return std::get<SiteCloud>(geometry).sites;
}

Matrix dirichlet_laplacian(Index p, int d) { return Matrix(sparse_laplacian(p, d)); }

GroundTruth build_lattice_precision(Index p, int d, int s, Index cap) {
  if (s < 1) throw InvalidInput("smoothness s must be >= 1, got " + std::to_string(s));
  const LatticeShape shape(p, d);
  check_cap(p, d, cap);
  GroundTruth t;
  t.omega = DenseSymMatrix(Matrix(sparse_precision(p, d, s)));
  t.sigma = spd_inverse(t.omega);
  t.kappa = condition_number(t.omega);
  t.geometry = shape;
  t.tag = ModelTag::laplacian_power;
  t.metadata = {{"model_tag", to_string(t.tag)}, {"p", std::to_string(p)}, {"d", std::to_string(d)},
                {"s", std::to_string(s)}};
  return t;
}

GroundTruth build_green_restriction(Index fine_m, int d, int s, const SiteCloud& cloud) {
  if (s < 1) throw InvalidInput("smoothness s must be >= 1, got " + std::to_string(s));
  if (cloud.d != d) throw InvalidInput("cloud dimension differs from d");
  const LatticeShape fine(fine_m, d);
  check_cap(fine_m, d, Index{1} << 22);
  const double scale = static_cast<double>(fine_m + 1);

  std::vector<Index> nodes;
  for (Index i = 0; i < cloud.size(); ++i) {
    Coord c{0, 0, 0};
    for (int a = 0; a < d; ++a) {
      const double pos = cloud.sites(i, a) * scale - 1.0;
      const double snapped = std::round(pos);
      if (std::abs(pos - snapped) > 1e-9 * scale || snapped < 0 || snapped >= static_cast<double>(fine_m)) {
        throw InvalidInput("site " + std::to_string(i) + " is not a node of the fine grid");
      }
      c[a] = static_cast<Index>(snapped);
    }
    nodes.push_back(fine.flat(c));
  }

  const Eigen::SparseMatrix<double> omega_fine = sparse_precision(fine_m, d, s);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(omega_fine);
  if (solver.info() != Eigen::Success) throw NumericalFailure("fine-grid precision factorization failed");
  Matrix rhs = Matrix::Zero(fine.size(), static_cast<Index>(nodes.size()));
  for (std::size_t i = 0; i < nodes.size(); ++i) rhs(nodes[i], static_cast<Index>(i)) = 1.0;
  const Matrix cols = solver.solve(rhs);
  Matrix sigma(static_cast<Index>(nodes.size()), static_cast<Index>(nodes.size()));
  for (std::size_t i = 0; i < nodes.size(); ++i) sigma.row(static_cast<Index>(i)) = cols.row(nodes[i]);

  GroundTruth t;
  t.sigma = DenseSymMatrix(sigma);
  t.omega = spd_inverse(t.sigma);
  t.kappa = condition_number(t.omega);
  t.geometry = cloud;
  t.tag = ModelTag::green_restriction;
  t.metadata = {{"model_tag", to_string(t.tag)}, {"fine_m", std::to_string(fine_m)}, {"d", std::to_string(d)},
                {"s", std::to_string(s)}, {"M", std::to_string(cloud.size())}};
  return t;
}

GroundTruth matern_covariance(const SiteCloud& cloud, double nu, double rho, double sigma2) {
  if (nu != 0.5 && nu != 1.5 && nu != 2.5) throw InvalidInput("Matern nu must be 0.5, 1.5 or 2.5");
  if (!(rho > 0.0) || !(sigma2 > 0.0)) throw InvalidInput("Matern rho and sigma2 must be positive");
  const Index m = cloud.size();
  Matrix sigma(m, m);
  for (Index i = 0; i < m; ++i) {
    sigma(i, i) = sigma2;
    for (Index j = 0; j < i; ++j) {
      const double v = matern((cloud.sites.row(i) - cloud.sites.row(j)).norm(), nu, rho, sigma2);
      sigma(i, j) = v;
      sigma(j, i) = v;
    }
  }
  GroundTruth t;
  t.sigma = DenseSymMatrix(sigma);
  t.omega = spd_inverse(t.sigma);
  t.kappa = condition_number(t.omega);
  t.geometry = cloud;
  t.tag = ModelTag::matern;
  t.metadata = {{"model_tag", to_string(t.tag)}, {"nu", fmt(nu)}, {"rho", fmt(rho)}, {"sigma2", fmt(sigma2)},
                {"M", std::to_string(m)},
                {"caveat", "whole-space kernel; screening weakens near the boundary"}};
  return t;
}

SampleMatrix sample_gaussian(const DenseSymMatrix& sigma, Index n, std::uint64_t seed) {
  if (n < 1) throw InvalidInput("sample size N must be >= 1");
  const LowerTriangular l = cholesky_lower(sigma);
  const Matrix g = standard_normal(n, sigma.dim(), seed);
  return SampleMatrix(g * l.matrix().transpose());
}

SampleMatrix sample(const GroundTruth& truth, Index n, std::uint64_t seed) {
  return sample_gaussian(truth.sigma, n, seed);
}

Matrix perturbed_grid_sites(Index per_axis, int d, Index fine_m, double jitter, std::uint64_t seed) {
  const LatticeShape coarse(per_axis, d);
  if (fine_m < per_axis) throw InvalidInput("fine grid is coarser than the site grid");
  CounterRng rng(seed, 0x73697465);
  const double ratio = static_cast<double>(fine_m + 1) / static_cast<double>(per_axis + 1);
  Matrix sites(coarse.size(), d);
  std::vector<Index> used;
  for (Index t = 0; t < coarse.size(); ++t) {
    const Coord c = coarse.coord(t);
    Coord node{0, 0, 0};
    for (int a = 0; a < d; ++a) {
      const double base = static_cast<double>(c[a] + 1) * ratio - 1.0;
      const double moved = std::round(base + jitter * rng.uniform(-1.0, 1.0));
      node[a] = std::clamp<Index>(static_cast<Index>(moved), 0, fine_m - 1);
    }
    // Keep sites distinct; fall back to the unjittered node on a collision.
    Index flat = LatticeShape(fine_m, d).flat(node);
    if (std::find(used.begin(), used.end(), flat) != used.end()) {
      for (int a = 0; a < d; ++a) node[a] = static_cast<Index>(std::round(static_cast<double>(c[a] + 1) * ratio - 1.0));
      flat = LatticeShape(fine_m, d).flat(node);
    }
    used.push_back(flat);
    for (int a = 0; a < d; ++a) sites(t, a) = static_cast<double>(node[a] + 1) / static_cast<double>(fine_m + 1);
  }
  return sites;
}

ScreeningProfile screening_profile(const DenseSymMatrix& omega, const Matrix& coords, double mesh,
                                   double floor_factor) {
  if (coords.rows() != omega.dim()) throw InvalidInput("coordinates do not match the precision dim");
  if (!(mesh > 0.0)) throw InvalidInput("mesh size must be positive");
  const Index m = omega.dim();
  std::map<Index, double> best;
  for (Index i = 0; i < m; ++i) {
    for (Index j = i + 1; j < m; ++j) {
      const double dist = (coords.row(i) - coords.row(j)).norm();
      const auto bin = static_cast<Index>(std::floor(dist / mesh + 1e-9));
      const double value = std::abs(omega(i, j)) / std::sqrt(omega(i, i) * omega(j, j));
      auto [it, inserted] = best.emplace(bin, value);
      if (!inserted) it->second = std::max(it->second, value);
    }
  }
  ScreeningProfile out;
  for (const auto& [bin, value] : best) {
    out.bins.push_back(bin);
    out.values.push_back(value);
  }
  const double floor = m > 1 ? floor_factor * std::numeric_limits<double>::epsilon() * condition_number(omega) : 0.0;
  std::vector<double> x, y;
  for (std::size_t i = 0; i < out.bins.size(); ++i) {
    if (!(out.values[i] > floor)) break;
    x.push_back(static_cast<double>(out.bins[i]));
    y.push_back(std::log(out.values[i]));
  }
  out.fitted_bins = x.size();
  if (x.size() >= 2) out.fit = fit_line(x, y);
  return out;
}

ScreeningProfile screening_profile(const GroundTruth& truth, double floor_factor) {
  return screening_profile(truth.omega, truth.coordinates(), truth.mesh(), floor_factor);
}

std::vector<double> l1_tail_profile(const DenseSymMatrix& omega, const LatticeShape& shape) {
  if (omega.dim() != shape.size()) throw InvalidInput("precision dim does not match the lattice");
  const double norm = spectral_norm(omega);
  const Index max_dist = static_cast<Index>(shape.d()) * (shape.p() - 1);
  // by_dist(t, k) = sum of |omega(t, t')| over |t - t'|_1 == k.
  Matrix by_dist = Matrix::Zero(shape.size(), max_dist + 1);
  for (Index t = 0; t < shape.size(); ++t) {
    const Coord a = shape.coord(t);
    for (Index u = 0; u < shape.size(); ++u) {
      const Coord b = shape.coord(u);
      Index dist = 0;
      for (int k = 0; k < shape.d(); ++k) dist += std::abs(a[k] - b[k]);
      by_dist(t, dist) += std::abs(omega(t, u));
    }
  }
  std::vector<double> tail(static_cast<std::size_t>(max_dist + 1), 0.0);
  for (Index t = 0; t < shape.size(); ++t) {
    double acc = 0.0;
    for (Index k = max_dist; k >= 0; --k) {
      acc += by_dist(t, k);
      tail[static_cast<std::size_t>(k)] = std::max(tail[static_cast<std::size_t>(k)], acc / norm);
    }
  }
  return tail;
}

void write_truth(std::ostream& out, const GroundTruth& truth, bool precision) {
  for (const auto& [key, value] : truth.metadata) out << "# " << key << '=' << value << '\n';
  out << "# kappa=" << format_double(truth.kappa) << '\n';
  out << "# matrix=" << (precision ? "omega" : "sigma") << '\n';
  write_matrix(out, precision ? truth.omega : truth.sigma);
}

}  // namespace gpprec

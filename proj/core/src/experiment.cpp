#include "gpprec/experiment.hpp"

#include "gpprec/cholesky_factor.hpp"
#include "gpprec/errors.hpp"
#include "gpprec/hierarchy.hpp"
#include "gpprec/matching.hpp"
#include "gpprec/matrix_io.hpp"
#include "gpprec/stats.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace gpprec {

namespace {

// Site jitter is drawn from this seed so every sample seed sees the same sites.
constexpr std::uint64_t kSiteSeed = 0x5349544553ull;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(const std::string& key, const std::string& value, const std::string& why) {
  throw InvalidInput("invalid " + key + "=" + value + ": " + why);
}

long long parse_int(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  long long out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size() || v.empty()) bad(key, value, "not an integer");
  return out;
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size() || v.empty()) bad(key, value, "not a nonnegative integer");
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    bad(key, value, "not a number");
  }
  if (used != v.size()) bad(key, value, "not a number");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  bad(key, value, "expected true or false");
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

const char* model_name(ModelKind m) {
  switch (m) {
    case ModelKind::laplacian:
      return "laplacian";
    case ModelKind::green:
      return "green";
    case ModelKind::matern:
      return "matern";
  }
  return "?";
}

const char* factor_name(FactorKind f) {
  switch (f) {
    case FactorKind::precision:
      return "precision";
    case FactorKind::cholesky:
      return "cholesky";
    case FactorKind::cholesky_star:
      return "cholesky-star";
  }
  return "?";
}

EstimatorConfig estimator_config(const ExperimentConfig& c) {
  EstimatorConfig e;
  e.b_override = c.b;
  e.kappa_hint = c.kappa_hint;
  e.block_constant = c.block_constant;
  return e;
}

Matrix permute_sym(const Matrix& a, const std::vector<Index>& perm) {
  return submatrix(a, perm, perm);
}

struct Outcome {
  Matrix estimate;
  Matrix truth;
  Index b = 0;
  EstimatePath path = EstimatePath::blockwise;
};

Outcome run_precision(const ExperimentConfig& c, const GroundTruth& truth, Index p, const SampleMatrix& z,
                      std::uint64_t seed) {
  Outcome o;
  o.truth = truth.omega.matrix();
  const EstimatorConfig cfg = estimator_config(c);
  if (c.scattered) {
    ScatterConfig sc;
    sc.c1 = c.c1;
    const ScatteredEstimate est = embed_and_estimate(z, std::get<SiteCloud>(truth.geometry), cfg, seed, sc);
    o.estimate = est.omega.matrix();
    o.b = est.b;
    o.path = est.path;
  } else {
    const PrecisionEstimate est = estimate_precision(z, LatticeShape(p, c.d), cfg);
    o.estimate = est.matrix.matrix();
    o.b = est.scheme.b();
    o.path = est.path;
  }
  return o;
}

Outcome run_factor(const ExperimentConfig& c, const GroundTruth& truth, const SampleMatrix& z, std::uint64_t seed) {
  const Matrix coords = truth.coordinates();
  const MaximinOrdering order = maximin_order(coords);
  const LevelPartition levels = assign_levels(order);
  Matrix sites(coords.rows(), coords.cols());
  for (std::size_t i = 0; i < order.perm.size(); ++i) sites.row(static_cast<Index>(i)) = coords.row(order.perm[i]);
  const DenseSymMatrix omega(permute_sym(truth.omega.matrix(), order.perm));
  Matrix zp(z.n_samples(), z.dim());
  for (std::size_t i = 0; i < order.perm.size(); ++i) zp.col(static_cast<Index>(i)) = z.rows().col(order.perm[i]);

  CholeskyConfig cfg;
  cfg.estimator = estimator_config(c);
  cfg.scatter.c1 = c.c1;
  cfg.seed = seed;
  std::vector<ScaleReport> report;
  const ScaleEstimates scales =
      estimate_scales(CovarianceSource::from_samples(SampleMatrix(std::move(zp))), sites, levels, c.d, cfg, &report);

  Outcome o;
  if (c.factor == FactorKind::cholesky) {
    o.estimate = assemble_U(scales, levels, c.d).upper();
    o.truth = exact_block_factor(omega, levels, c.d).upper();
  } else {
    o.estimate = assemble_U_star(scales, levels, c.d).upper();
    o.truth = exact_block_factor_star(omega, levels, c.d).upper();
  }
  o.b = report.back().b;
  o.path = report.back().path;
  return o;
}

}  // namespace

void ExperimentConfig::set(const std::string& raw_key, const std::string& value) {
  std::string key = trim(raw_key);
  while (!key.empty() && key.front() == '-') key.erase(key.begin());
  std::replace(key.begin(), key.end(), '_', '-');
  if (key == "model") {
    const std::string v = trim(value);
    if (v == "laplacian") model = ModelKind::laplacian;
    else if (v == "green") model = ModelKind::green;
    else if (v == "matern") model = ModelKind::matern;
    else bad(key, value, "expected laplacian, green or matern");
  } else if (key == "d") {
    d = static_cast<int>(parse_int(key, value));
  } else if (key == "p") {
    p.clear();
    for (const auto& item : split_list(value)) p.push_back(parse_int(key, item));
  } else if (key == "s") {
    s = static_cast<int>(parse_int(key, value));
  } else if (key == "n") {
    n.clear();
    for (const auto& item : split_list(value)) n.push_back(parse_int(key, item));
  } else if (key == "seeds") {
    seeds.clear();
    for (const auto& item : split_list(value)) seeds.push_back(parse_uint(key, item));
  } else if (key == "c1") {
    c1 = parse_double(key, value);
  } else if (key == "b") {
    const std::string v = trim(value);
    if (v.empty() || v == "auto") b.reset();
    else b = parse_int(key, value);
  } else if (key == "factor") {
    const std::string v = trim(value);
    if (v == "precision") factor = FactorKind::precision;
    else if (v == "cholesky") factor = FactorKind::cholesky;
    else if (v == "cholesky-star") factor = FactorKind::cholesky_star;
    else bad(key, value, "expected precision, cholesky or cholesky-star");
  } else if (key == "scattered") {
    scattered = parse_bool(key, value);
  } else if (key == "out") {
    out = trim(value);
  } else if (key == "block-constant") {
    block_constant = parse_double(key, value);
  } else if (key == "kappa-hint") {
    kappa_hint = parse_double(key, value);
  } else if (key == "threads") {
    threads = static_cast<unsigned>(parse_int(key, value));
  } else if (key == "timing") {
    timing = parse_bool(key, value);
  } else if (key == "dump") {
    dump = trim(value);
  } else if (key == "fine-factor") {
    fine_factor = parse_int(key, value);
  } else if (key == "jitter") {
    jitter = parse_double(key, value);
  } else if (key == "nu") {
    nu = parse_double(key, value);
  } else if (key == "rho") {
    rho = parse_double(key, value);
  } else if (key == "sigma2") {
    sigma2 = parse_double(key, value);
  } else {
    throw InvalidInput("unknown config key '" + key + "'");
  }
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw InvalidInput("invalid " + field + ": " + why);
  };
  if (d < 1 || d > 3) fail("d=" + std::to_string(d), "must be 1, 2 or 3");
  if (p.empty()) fail("p", "list is empty");
  for (Index v : p) {
    if (v < 1) fail("p=" + std::to_string(v), "must be >= 1");
  }
  if (s < 1) fail("s=" + std::to_string(s), "must be >= 1");
  if (n.empty()) fail("n", "list is empty");
  for (Index v : n) {
    if (v < 1) fail("n=" + std::to_string(v), "must be >= 1");
  }
  if (seeds.empty()) fail("seeds", "list is empty");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) fail("seeds", "must be distinct");
  if (!(c1 > 0.0 && c1 <= 1.0)) fail("c1", "must lie in (0,1]");
  if (b && *b < 1) fail("b=" + std::to_string(*b), "must be >= 1");
  if (!(block_constant > 0.0)) fail("block-constant", "must be positive");
  if (kappa_hint && !(*kappa_hint >= 1.0)) fail("kappa-hint", "must be >= 1");
  if (threads < 1) fail("threads", "must be >= 1");
  if (fine_factor < 2) fail("fine-factor", "must be >= 2");
  if (!(jitter >= 0.0) || jitter >= 0.5 * static_cast<double>(fine_factor)) {
    fail("jitter", "must lie in [0, fine-factor/2)");
  }
  if (nu != 0.5 && nu != 1.5 && nu != 2.5) fail("nu", "must be 0.5, 1.5 or 2.5");
  if (!(rho > 0.0)) fail("rho", "must be positive");
  if (!(sigma2 > 0.0)) fail("sigma2", "must be positive");
  if (scattered && model == ModelKind::laplacian) {
    fail("scattered", "needs a site-based model (green or matern)");
  }
}

void load_config_file(ExperimentConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidInput(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    config.set(line.substr(0, eq), line.substr(eq + 1));
  }
}

GroundTruth make_truth(const ExperimentConfig& c, Index p, std::uint64_t) {
  if (c.model == ModelKind::laplacian) return build_lattice_precision(p, c.d, c.s);
  const Index fine_m = c.fine_factor * (p + 1) - 1;
  const double jitter = c.scattered ? c.jitter * static_cast<double>(c.fine_factor) : 0.0;
  const SiteCloud cloud = measure_cloud(perturbed_grid_sites(p, c.d, fine_m, jitter, kSiteSeed));
  if (c.model == ModelKind::green) return build_green_restriction(fine_m, c.d, c.s, cloud);
  return matern_covariance(cloud, c.nu, c.rho, c.sigma2);
}

std::vector<ResultRow> run_grid(const ExperimentConfig& config, const std::string& command) {
  config.validate();
  std::map<Index, GroundTruth> truths;
  for (Index p : config.p) {
    if (!truths.count(p)) truths.emplace(p, make_truth(config, p, kSiteSeed));
  }
  struct Task {
    Index p;
    Index n;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (Index p : config.p) {
    for (Index n : config.n) {
      for (std::uint64_t seed : config.seeds) tasks.push_back({p, n, seed});
    }
  }
  if (!config.dump.empty()) std::filesystem::create_directories(config.dump);

  std::vector<ResultRow> rows(tasks.size());
  detail::parallel_for(static_cast<long>(tasks.size()), config.threads, [&](long i) {
    const Task& t = tasks[static_cast<std::size_t>(i)];
    const GroundTruth& truth = truths.at(t.p);
    ResultRow& row = rows[static_cast<std::size_t>(i)];
    row.experiment_id = command + "-" + model_name(config.model) + "-" + factor_name(config.factor) +
                        (config.scattered ? "-scattered" : "") + "-d" + std::to_string(config.d) + "-p" +
                        std::to_string(t.p) + "-s" + std::to_string(config.s) + "-N" + std::to_string(t.n);
    row.model_tag = to_string(truth.tag);
    row.d = config.d;
    row.p = t.p;
    row.s = config.s;
    row.n = t.n;
    row.seed = t.seed;
    row.kappa = truth.kappa;
    const auto start = std::chrono::steady_clock::now();
    try {
      const SampleMatrix z = sample(truth, t.n, t.seed);
      const Outcome o = config.factor == FactorKind::precision ? run_precision(config, truth, t.p, z, t.seed)
                                                               : run_factor(config, truth, z, t.seed);
      row.b = o.b;
      row.path = to_string(o.path);
      row.rel_spectral_error = relative_spectral_error(o.estimate, o.truth);
      if (!config.dump.empty()) {
        const std::string stem = config.dump + "/" + row.experiment_id + "-seed" + std::to_string(t.seed);
        std::ofstream est(stem + "-estimate.txt");
        write_rect(est, o.estimate);
        std::ofstream tru(stem + "-truth.txt");
        write_rect(tru, o.truth);
      }
    } catch (const std::exception& e) {
      row.error = sanitize(e.what());
      row.path.clear();
      row.rel_spectral_error = 0.0;
    }
    if (config.timing) {
      row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
  });
  return rows;
}

void write_csv_header(std::ostream& out) {
  out << kCsvVersion << '\n';
  out << "experiment_id,model_tag,d,p,s,N,seed,b,path,rel_spectral_error,kappa,wall_ms,error\n";
}

void write_csv_row(std::ostream& out, const ResultRow& r) {
  out << r.experiment_id << ',' << r.model_tag << ',' << r.d << ',' << r.p << ',' << r.s << ',' << r.n << ','
      << r.seed << ',' << r.b << ',' << r.path << ',' << (r.error.empty() ? format_double(r.rel_spectral_error) : "")
      << ',' << format_double(r.kappa) << ',' << format_double(r.wall_ms) << ',' << r.error << '\n';
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  write_csv_header(out);
  for (const auto& r : rows) write_csv_row(out, r);
}

std::vector<ResultRow> read_csv(std::istream& in) {
  std::vector<ResultRow> rows;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.rfind("# aggregate", 0) == 0) break;
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(item);
    if (line.back() == ',') f.emplace_back();
    if (f.size() != 13) throw InvalidInput("CSV row has " + std::to_string(f.size()) + " fields, expected 13");
    ResultRow r;
    r.experiment_id = f[0];
    r.model_tag = f[1];
    r.d = static_cast<int>(parse_int("d", f[2]));
    r.p = parse_int("p", f[3]);
    r.s = static_cast<int>(parse_int("s", f[4]));
    r.n = parse_int("N", f[5]);
    r.seed = parse_uint("seed", f[6]);
    r.b = parse_int("b", f[7]);
    r.path = f[8];
    r.rel_spectral_error = f[9].empty() ? 0.0 : parse_double("rel_spectral_error", f[9]);
    r.kappa = parse_double("kappa", f[10]);
    r.wall_ms = parse_double("wall_ms", f[11]);
    r.error = f[12];
    rows.push_back(r);
  }
  return rows;
}

Aggregate aggregate(const std::vector<ResultRow>& rows) {
  Aggregate agg;
  std::map<std::pair<Index, Index>, std::vector<double>> groups;
  std::set<std::uint64_t> seeds;
  for (const auto& r : rows) {
    if (!r.error.empty()) continue;
    groups[{r.p, r.n}].push_back(r.rel_spectral_error);
    seeds.insert(r.seed);
  }
  if (groups.empty() || (groups.size() == 1 && seeds.size() <= 1)) return agg;
  for (const auto& [key, errs] : groups) agg.medians.push_back({key.first, key.second, median(errs), errs.size()});

  std::map<Index, std::vector<std::pair<double, double>>> by_p, by_n;
  for (const auto& m : agg.medians) {
    by_p[m.p].emplace_back(static_cast<double>(m.n), m.median_error);
    by_n[m.n].emplace_back(static_cast<double>(m.p), m.median_error);
  }
  auto add = [&](const std::string& kind, Index fixed, const std::vector<std::pair<double, double>>& pts) {
    if (pts.size() < 2) return;
    std::vector<double> x, y;
    for (const auto& [a, b] : pts) {
      if (!(b > 0.0)) return;
      x.push_back(a);
      y.push_back(b);
    }
    agg.slopes.push_back({kind, fixed, fit_loglog(x, y)});
  };
  for (const auto& [p, pts] : by_p) add("error_vs_N", p, pts);
  for (const auto& [n, pts] : by_n) add("error_vs_p", n, pts);
  return agg;
}

void write_aggregate(std::ostream& out, const Aggregate& agg) {
  if (agg.empty()) return;
  out << "# aggregate\n";
  out << "# median,p,N,median_rel_spectral_error,seeds\n";
  for (const auto& m : agg.medians) {
    out << "median," << m.p << ',' << m.n << ',' << format_double(m.median_error) << ',' << m.seeds << '\n';
  }
  if (agg.slopes.empty()) return;
  out << "# slope,kind,fixed,slope,intercept,r_squared\n";
  for (const auto& s : agg.slopes) {
    out << "slope," << s.kind << ',' << s.fixed << ',' << format_double(s.fit.slope) << ','
        << format_double(s.fit.intercept) << ',' << format_double(s.fit.r_squared) << '\n';
  }
}

std::vector<std::string> simulate(const ExperimentConfig& config, const std::string& dir) {
  config.validate();
  std::filesystem::create_directories(dir);
  std::vector<std::string> written;
  auto open = [&](const std::string& name) {
    const std::string path = dir + "/" + name;
    std::ofstream f(path);
    if (!f) throw Error("cannot open " + path + " for writing");
    written.push_back(path);
    return f;
  };
  for (Index p : config.p) {
    const GroundTruth truth = make_truth(config, p, kSiteSeed);
    const std::string tag = model_name(config.model) + std::string("-d") + std::to_string(config.d) + "-p" +
                            std::to_string(p) + "-s" + std::to_string(config.s);
    {
      auto f = open(tag + "-omega.txt");
      write_truth(f, truth, true);
    }
    {
      auto f = open(tag + "-sigma.txt");
      write_truth(f, truth, false);
    }
    if (const auto* cloud = std::get_if<SiteCloud>(&truth.geometry)) {
      auto f = open(tag + "-sites.txt");
      write_cloud(f, *cloud);
    }
    for (Index n : config.n) {
      for (std::uint64_t seed : config.seeds) {
        auto f = open(tag + "-N" + std::to_string(n) + "-seed" + std::to_string(seed) + "-samples.txt");
        f << "# seed=" << seed << '\n';
        write_samples(f, sample(truth, n, seed));
      }
    }
  }
  return written;
}

void write_verification(std::ostream& out, const std::vector<SuiteResult>& results) {
  for (const auto& r : results) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name;
    for (const auto& [k, v] : r.stats) out << ' ' << k << '=' << format_double(v);
    if (!r.detail.empty()) out << "  (" << r.detail << ')';
    out << '\n';
  }
}

}  // namespace gpprec

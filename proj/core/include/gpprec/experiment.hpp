#pragma once

#include "gpprec/estimator.hpp"
#include "gpprec/truth.hpp"
#include "gpprec/verification.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gpprec {

enum class ModelKind { laplacian, green, matern };
enum class FactorKind { precision, cholesky, cholesky_star };

struct ExperimentConfig {
  ModelKind model = ModelKind::laplacian;
  int d = 1;
  std::vector<Index> p{40};
  int s = 1;
  std::vector<Index> n{1000};
  std::vector<std::uint64_t> seeds{1};
  double c1 = 0.5;
  std::optional<Index> b;
  FactorKind factor = FactorKind::precision;
  bool scattered = false;
  std::string out;

  double block_constant = 1.0;
  std::optional<double> kappa_hint;
  unsigned threads = 1;
  bool timing = false;
  /// Directory for per-row estimate and truth matrices; empty disables.
  std::string dump;

  // Site and model details for the green and matern models.
  Index fine_factor = 4;
  double jitter = 0.3;
  double nu = 1.5;
  double rho = 0.2;
  double sigma2 = 1.0;

  /// Sets one field from its key=value spelling (the CLI flag names without
  /// dashes). Throws InvalidInput naming the key on a bad value.
  void set(const std::string& key, const std::string& value);
  void validate() const;
};

/// Applies every key=value line of a config file; '#' starts a comment.
void load_config_file(ExperimentConfig& config, const std::string& path);

struct ResultRow {
  std::string experiment_id;
  std::string model_tag;
  int d = 1;
  Index p = 0;
  int s = 1;
  Index n = 0;
  std::uint64_t seed = 0;
  Index b = 0;
  std::string path;
  double rel_spectral_error = 0.0;
  double kappa = 0.0;
  double wall_ms = 0.0;
  std::string error;
};

/// Truth for one grid point: lattice, regular-grid sites, or (scattered)
/// jittered sites.
GroundTruth make_truth(const ExperimentConfig& config, Index p, std::uint64_t seed);

/// One row per (p, N, seed), in that nesting order.
std::vector<ResultRow> run_grid(const ExperimentConfig& config, const std::string& command);

inline constexpr const char* kCsvVersion = "# gpprec-results v1";
void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const ResultRow& row);
void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_csv(std::istream& in);

struct AggregateRow {
  Index p = 0;
  Index n = 0;
  double median_error = 0.0;
  std::size_t seeds = 0;
};

struct SlopeFit {
  std::string kind;  // "error_vs_N" or "error_vs_p"
  Index fixed = 0;   // the held p or N
  LineFit fit;
};

struct Aggregate {
  std::vector<AggregateRow> medians;
  std::vector<SlopeFit> slopes;
  bool empty() const noexcept { return medians.empty(); }
};

/// Medians over seeds of the successful rows and log-log slopes. Empty for a
/// single grid point with a single seed.
Aggregate aggregate(const std::vector<ResultRow>& rows);
void write_aggregate(std::ostream& out, const Aggregate& agg);

/// Writes truth, sites (if any) and one sample file per (N, seed) into dir.
std::vector<std::string> simulate(const ExperimentConfig& config, const std::string& dir);

void write_verification(std::ostream& out, const std::vector<SuiteResult>& results);

}  // namespace gpprec

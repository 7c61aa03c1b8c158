// gpprec: truth generation, estimation and verification experiments.

#include "gpprec/errors.hpp"
#include "gpprec/experiment.hpp"
#include "gpprec/verification.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

namespace {

// Flags shared by the experiment subcommands. Values are kept as text and
// applied on top of the optional --config file, so the command line wins.
struct SharedFlags {
  std::string config_file;
  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, CLI::Option*>> options;
  bool scattered = false;
  bool timing = false;
  CLI::Option* scattered_opt = nullptr;
  CLI::Option* timing_opt = nullptr;
};

void add_shared(CLI::App* cmd, SharedFlags& f) {
  cmd->add_option("--config", f.config_file, "key=value file applied before the flags");
  const std::vector<std::pair<std::string, std::string>> flags = {
      {"model", "laplacian | green | matern"},
      {"d", "spatial dimension (1-3)"},
      {"p", "lattice side or sites per axis (comma list)"},
      {"s", "smoothness order"},
      {"n", "sample sizes (comma list)"},
      {"seeds", "sample seeds (comma list)"},
      {"c1", "lattice sizing constant in (0,1]"},
      {"b", "block width override"},
      {"factor", "precision | cholesky | cholesky-star"},
      {"out", "output file (stdout when absent)"},
      {"block-constant", "c0 in b = ceil(c0 ln(N kappa))"},
      {"kappa-hint", "kappa used by the block-size rule"},
      {"threads", "worker threads"},
      {"dump", "directory for per-row estimate and truth matrices"},
      {"fine-factor", "fine grid refinement for site models"},
      {"jitter", "site jitter in coarse-grid units for --scattered"},
      {"nu", "Matern smoothness (0.5, 1.5, 2.5)"},
      {"rho", "Matern length scale"},
      {"sigma2", "Matern variance"},
  };
  for (const auto& [name, help] : flags) {
    f.options.emplace_back(name, cmd->add_option("--" + name, f.values[name], help));
  }
  f.scattered_opt = cmd->add_flag("--scattered", f.scattered, "estimate at scattered sites via the lattice embedding");
  f.timing_opt = cmd->add_flag("--timing", f.timing, "record wall_ms (breaks byte-identical reruns)");
}

gpprec::ExperimentConfig resolve(const SharedFlags& f) {
  gpprec::ExperimentConfig cfg;
  if (!f.config_file.empty()) gpprec::load_config_file(cfg, f.config_file);
  for (const auto& [name, opt] : f.options) {
    if (opt->count() > 0) cfg.set(name, f.values.at(name));
  }
  if (f.scattered_opt->count() > 0) cfg.scattered = f.scattered;
  if (f.timing_opt->count() > 0) cfg.timing = f.timing;
  cfg.validate();
  return cfg;
}

// Writes to cfg.out when set, else stdout.
template <typename Fn>
void emit(const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw gpprec::Error("cannot open " + path + " for writing");
  fn(out);
}

int count_errors(const std::vector<gpprec::ResultRow>& rows) {
  int n = 0;
  for (const auto& r : rows) {
    if (!r.error.empty()) {
      std::cerr << "row " << r.experiment_id << " seed " << r.seed << ": " << r.error << '\n';
      ++n;
    }
  }
  return n;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Precision matrix and block-Cholesky estimation experiments"};
  app.require_subcommand(1);

  SharedFlags sim_flags, est_flags, study_flags, bench_flags;
  auto* sim = app.add_subcommand("simulate", "write truth matrices and sample files");
  add_shared(sim, sim_flags);
  auto* est = app.add_subcommand("estimate", "estimate and report relative spectral errors as CSV");
  add_shared(est, est_flags);
  auto* study = app.add_subcommand("scaling-study", "estimate over a (p, N, seed) grid with aggregate fits");
  add_shared(study, study_flags);
  auto* bench = app.add_subcommand("bench", "time the estimator over the configured grid");
  add_shared(bench, bench_flags);

  auto* verify = app.add_subcommand("verify", "run the property suites");
  std::vector<std::string> suites;
  bool inject = false;
  std::uint64_t verify_seed = 1;
  std::string verify_out;
  verify->add_option("--suite", suites, "suite(s) to run; all when absent")->delimiter(',');
  verify->add_flag("--inject-asymmetric", inject, "negative control for the symmetry suite");
  verify->add_option("--seed", verify_seed, "corpus seed");
  verify->add_option("--out", verify_out, "also write a CSV report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*sim) {
      const auto cfg = resolve(sim_flags);
      const std::string dir = cfg.out.empty() ? "." : cfg.out;
      for (const auto& path : gpprec::simulate(cfg, dir)) std::cout << path << '\n';
      return 0;
    }
    if (*est || *study || *bench) {
      SharedFlags& flags = *est ? est_flags : (*study ? study_flags : bench_flags);
      auto cfg = resolve(flags);
      if (*bench) cfg.timing = true;
      const std::string command = *est ? "estimate" : (*study ? "scaling-study" : "bench");
      const auto rows = gpprec::run_grid(cfg, command);
      emit(cfg.out, [&](std::ostream& out) {
        gpprec::write_csv(out, rows);
        if (*study) gpprec::write_aggregate(out, gpprec::aggregate(rows));
      });
      return count_errors(rows) == 0 ? 0 : 1;
    }
    if (*verify) {
      gpprec::VerifyOptions opt;
      opt.suites = suites;
      opt.inject_asymmetric = inject;
      opt.seed = verify_seed;
      const auto results = gpprec::run_verification(opt);
      gpprec::write_verification(std::cout, results);
      if (!verify_out.empty()) {
        emit(verify_out, [&](std::ostream& out) {
          out << "suite,passed,stat,value\n";
          for (const auto& r : results) {
            if (r.stats.empty()) out << r.name << ',' << r.passed << ",,\n";
            for (const auto& [k, v] : r.stats) out << r.name << ',' << r.passed << ',' << k << ',' << v << '\n';
          }
        });
      }
      int failed = 0;
      for (const auto& r : results) {
        if (!r.passed) {
          std::cerr << "suite failed: " << r.name << '\n';
          ++failed;
        }
      }
      return failed == 0 ? 0 : 1;
    }
  } catch (const gpprec::InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

/**
 * @file cli.hpp
 * @brief Command-line front end: `run`, `young`, and `print-config`
 *        subcommands over the ensemble driver.
 *
 * Option precedence, lowest to highest: built-in defaults, the preset
 * (--preset flag wins over a `preset =` line in the file), explicit keys
 * from --config in file order, then individual flags.
 *
 * Exit codes: 0 on success, 1 when a run fails or violates a hard
 * invariant (mass drift, negative density, region escape), 2 for
 * configuration errors.
 */
#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flume/config.hpp"
#include "flume/dynamics.hpp"
#include "flume/ensemble.hpp"
#include "flume/snapshot.hpp"

namespace flume {
namespace cli_detail {

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Column order and header bytes are a published contract; the rate
/// column name carries a UTF-8 circumflex.
inline constexpr const char* kStatsHeader =
    "t,mean_energy,time_avg_energy,mean_mass,mean_momentum,momentum_stderr,"
    "min_rho,it\xc3\xb4_injection_rate,invariant_violations\n";

inline void write_stats_csv(const std::string& path, const std::vector<TimeSeriesRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << kStatsHeader;
  for (const TimeSeriesRow& r : rows) {
    out << fmt17(r.t) << ',' << fmt17(r.mean_energy) << ',' << fmt17(r.time_avg_energy)
        << ',' << fmt17(r.mean_mass) << ',' << fmt17(r.mean_momentum) << ','
        << fmt17(r.momentum_stderr) << ',' << fmt17(r.min_rho) << ','
        << fmt17(r.ito_injection_rate) << ',' << r.invariant_violations << '\n';
  }
}

inline void write_failure(const std::string& dir, const std::string& reason) {
  std::ofstream out(dir + "/failure.txt", std::ios::binary);
  out << "status fail\n"
      << "reason " << reason << "\n";
}

/// Both injection-rate conventions go to the summary: the state-dependent
/// Ito drift at t = 0, and for topographic forcing the flat-coefficient
/// value (1/2) sum sigma_k^2 E int h dx that ignores the h g dH/dx
/// structure of the modes.
inline void write_summary(const std::string& dir, const RunConfig& cfg,
                          const EnsembleResult& res) {
  std::ofstream out(dir + "/summary.txt", std::ios::binary);
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(config_hash(cfg)));
  const TimeSeriesRow& first = res.rows.front();
  const TimeSeriesRow& last = res.rows.back();
  out << "preset " << cfg.preset << "\n"
      << "config_hash " << hash << "\n"
      << "realizations " << res.n_realizations << "\n"
      << "periods " << res.n_periods << "\n"
      << "horizon " << fmt17(cfg.horizon) << "\n"
      << "rows " << res.rows.size() << "\n"
      << "initial_energy " << fmt17(first.mean_energy) << "\n"
      << "final_energy " << fmt17(last.mean_energy) << "\n"
      << "final_time_avg_energy " << fmt17(last.time_avg_energy) << "\n"
      << "injection_rate_state " << fmt17(first.ito_injection_rate) << "\n";
  if (cfg.noise_kind == "shallow_water_topography") {
    double sum_sq = 0.0;
    for (double s : cfg.sigma) sum_sq += s * s;
    out << "injection_rate_flat " << fmt17(0.5 * sum_sq * first.mean_mass) << "\n";
  }
  out << "mean_grad_energy " << fmt17(res.mean_grad_energy) << "\n"
      << "max_velocity_l8 " << fmt17(res.max_velocity_l8) << "\n"
      << "max_det_momentum_drift " << fmt17(res.max_det_momentum_drift) << "\n"
      << "invariant_violations " << last.invariant_violations << "\n"
      << "min_rho " << fmt17(last.min_rho) << "\n"
      << "status ok\n";
}

struct HardCheck {
  bool ok = true;
  std::string reason;
};

/// Conservation and positivity gates a finished run must clear before
/// the process may exit 0.
inline HardCheck hard_checks(const RunConfig& cfg, const EnsembleResult& res) {
  HardCheck c;
  double m0 = res.rows.front().mean_mass;
  double scale = std::max(1.0, std::abs(m0));
  for (const TimeSeriesRow& r : res.rows) {
    if (std::abs(r.mean_mass - m0) > 1e-12 * scale) {
      c.ok = false;
      c.reason = "mass drift " + fmt17(std::abs(r.mean_mass - m0)) + " at t = " + fmt17(r.t);
      return c;
    }
    if (r.min_rho < 0.0) {
      c.ok = false;
      c.reason = "negative density " + fmt17(r.min_rho) + " at t = " + fmt17(r.t);
      return c;
    }
  }
  if (cfg.kappa_bound && res.rows.back().invariant_violations != 0) {
    c.ok = false;
    c.reason = std::to_string(res.rows.back().invariant_violations) +
               " cells left the invariant region";
  }
  return c;
}

struct RunOutcome {
  int exit_code = 0;
  EnsembleResult result;
};

/// Shared driver for `run` and `young`: validates, simulates, writes the
/// standard outputs, and applies the hard gates.
inline RunOutcome execute(const RunConfig& cfg) {
  RunOutcome out;
  GasLaw law = make_gas_law(cfg);
  Grid grid(cfg.cells);
  ConservedField initial = make_initial(cfg, grid);
  NoiseModel noise = make_noise(cfg);
  EnsembleConfig ecfg = make_ensemble(cfg);

  std::filesystem::create_directories(cfg.output_dir);
  try {
    out.result = run_ensemble(law, grid, initial, noise, ecfg);
  } catch (const std::exception& e) {
    write_failure(cfg.output_dir, e.what());
    std::fprintf(stderr, "run failed: %s\n", e.what());
    out.exit_code = 1;
    return out;
  }

  write_stats_csv(cfg.output_dir + "/stats.csv", out.result.rows);
  write_summary(cfg.output_dir, cfg, out.result);
  if (cfg.emit_snapshots) {
    write_snapshots(cfg.output_dir + "/snapshots.bin", out.result.snapshots);
    SnapshotManifest manifest;
    manifest.n_cells = grid.n_cells;
    manifest.config_hash = config_hash(cfg);
    // Records are realization-major, so the per-realization time ladder
    // repeats; the manifest lists each recorded time once.
    for (const SnapshotRecord& rec : out.result.snapshots.records)
      manifest.times.push_back(double(rec.step) * cfg.tau);
    std::sort(manifest.times.begin(), manifest.times.end());
    manifest.times.erase(std::unique(manifest.times.begin(), manifest.times.end()),
                         manifest.times.end());
    write_manifest(cfg.output_dir + "/snapshots.manifest", manifest);
  }

  HardCheck check = hard_checks(cfg, out.result);
  if (!check.ok) {
    write_failure(cfg.output_dir, check.reason);
    std::fprintf(stderr, "invariant check failed: %s\n", check.reason.c_str());
    out.exit_code = 1;
  }
  return out;
}

inline int cmd_run(const RunConfig& cfg) {
  RunOutcome out = execute(cfg);
  if (out.exit_code != 0) return out.exit_code;
  std::printf("wrote %s/stats.csv (%zu rows, %d realizations)\n", cfg.output_dir.c_str(),
              out.result.rows.size(), out.result.n_realizations);
  std::printf("status ok\n");
  return 0;
}

inline void write_young_csv(const std::string& path, const YoungHistogram& h) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "bin_w,bin_z,count,mass,mean_w,mean_z\n";
  for (int bw = 0; bw < h.bins_w; ++bw)
    for (int bz = 0; bz < h.bins_z; ++bz) {
      std::size_t b = std::size_t(bw) * std::size_t(h.bins_z) + std::size_t(bz);
      long c = h.counts[b];
      if (c == 0) continue;
      out << bw << ',' << bz << ',' << c << ',' << fmt17(double(c) / double(h.total_samples))
          << ',' << fmt17(h.sum_w[b] / double(c)) << ',' << fmt17(h.sum_z[b] / double(c))
          << '\n';
    }
}

struct YoungOptions {
  int bins_w = 64;
  int bins_z = 64;
  double x_min = 0.0;
  double x_max = 1.0;
};

inline int cmd_young(RunConfig cfg, const YoungOptions& opts) {
  cfg.emit_snapshots = true;
  RunOutcome out = execute(cfg);
  if (out.exit_code != 0) return out.exit_code;

  const SnapshotStore& store = out.result.snapshots;
  if (store.records.empty()) {
    std::fprintf(stderr, "young: the run stored no snapshots\n");
    return 1;
  }
  std::uint32_t last_step = 0;
  for (const SnapshotRecord& rec : store.records)
    last_step = std::max(last_step, rec.step);

  GasLaw law = make_gas_law(cfg);
  Grid grid(cfg.cells);
  ConservedField initial = make_initial(cfg, grid);
  // Vacuum cut: a millionth of the initial mean density.
  double vacuum_threshold = 1e-6 * total_mass(grid, initial);

  YoungWindow win;
  win.x_min = opts.x_min;
  win.x_max = opts.x_max;
  win.step = last_step;
  YoungHistogram hist =
      young_histogram(law, grid, store, win, opts.bins_w, opts.bins_z, vacuum_threshold);
  write_young_csv(cfg.output_dir + "/young.csv", hist);

  JacobiQuadrature quad = JacobiQuadrature::build(law.lambda);
  double residual =
      functional_equation_residual(law, quad, hist, energy_kernel(), momentum_kernel());

  std::printf("t %s\n", fmt17(double(last_step) * cfg.tau).c_str());
  std::printf("samples %ld\n", hist.total_samples);
  std::printf("vacuum_mass %s\n", fmt17(hist.vacuum_mass).c_str());
  std::printf("score %s\n", fmt17(dirac_or_vacuum_score(hist)).c_str());
  std::printf("residual %s\n", fmt17(residual).c_str());
  std::printf("wrote %s/young.csv\n", cfg.output_dir.c_str());
  return 0;
}

/// Flag values captured by CLI11; presence is read back through count().
struct FlagValues {
  std::string config_path;
  std::string preset;
  std::uint64_t seed = 0;
  int realizations = 0;
  double horizon = 0.0;
  int cells = 0;
  double tau = 0.0;
  double epsilon = 0.0;
  std::string out_dir;
  bool snapshots = false;
  int threads = 0;
};

inline void add_common_flags(CLI::App* sub, FlagValues& v) {
  sub->add_option("--config", v.config_path, "configuration file (key = value lines)");
  sub->add_option("--preset", v.preset, "base preset: custom, test1, test2, test3, test4");
  sub->add_option("--seed", v.seed, "master seed");
  sub->add_option("--realizations", v.realizations, "independent sample paths");
  sub->add_option("--horizon", v.horizon, "final time (whole number of periods)");
  sub->add_option("--cells", v.cells, "grid cells");
  sub->add_option("--tau", v.tau, "splitting half-step");
  sub->add_option("--epsilon", v.epsilon, "viscosity");
  sub->add_option("--out", v.out_dir, "output directory");
  sub->add_flag("--snapshots", v.snapshots, "store state snapshots");
  sub->add_option("--threads", v.threads, "worker threads (0 = hardware)");
}

inline RunConfig merge_config(const CLI::App* sub, const FlagValues& v) {
  std::vector<std::pair<std::string, std::string>> items;
  if (sub->count("--config")) {
    std::ifstream in(v.config_path);
    if (!in) throw ConfigError("config: cannot open " + v.config_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    items = parse_items(buf.str());
  }
  std::string preset = "custom";
  for (const auto& [k, val] : items)
    if (k == "preset") preset = val;
  if (sub->count("--preset")) preset = v.preset;

  RunConfig cfg = load_preset(preset);
  for (const auto& [k, val] : items)
    if (k != "preset") apply_item(cfg, k, val);

  if (sub->count("--seed")) cfg.seed = v.seed;
  if (sub->count("--realizations")) cfg.realizations = v.realizations;
  if (sub->count("--horizon")) cfg.horizon = v.horizon;
  if (sub->count("--cells")) cfg.cells = v.cells;
  if (sub->count("--tau")) cfg.tau = v.tau;
  if (sub->count("--epsilon")) cfg.epsilon = v.epsilon;
  if (sub->count("--out")) cfg.output_dir = v.out_dir;
  if (sub->count("--snapshots")) cfg.emit_snapshots = true;
  if (sub->count("--threads")) cfg.threads = v.threads;
  return cfg;
}

}  // namespace cli_detail

inline int run_cli(int argc, const char* const* argv) {
  using namespace cli_detail;
  CLI::App app{"stochastically forced isentropic gas dynamics on the torus"};
  app.require_subcommand(1);

  FlagValues run_v, young_v, print_v;
  YoungOptions young_opts;

  CLI::App* run_cmd = app.add_subcommand("run", "simulate an ensemble and write statistics");
  add_common_flags(run_cmd, run_v);

  CLI::App* young_cmd =
      app.add_subcommand("young", "histogram the terminal states in invariant coordinates");
  add_common_flags(young_cmd, young_v);
  young_cmd->add_option("--bins-w", young_opts.bins_w, "bins along w");
  young_cmd->add_option("--bins-z", young_opts.bins_z, "bins along z");
  young_cmd->add_option("--x-min", young_opts.x_min, "window left edge");
  young_cmd->add_option("--x-max", young_opts.x_max, "window right edge");

  CLI::App* print_cmd =
      app.add_subcommand("print-config", "print the effective configuration and exit");
  add_common_flags(print_cmd, print_v);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run_cmd->parsed()) {
      RunConfig cfg = merge_config(run_cmd, run_v);
      validate_config(cfg);
      return cmd_run(cfg);
    }
    if (young_cmd->parsed()) {
      RunConfig cfg = merge_config(young_cmd, young_v);
      validate_config(cfg);
      if (young_opts.bins_w < 1 || young_opts.bins_z < 1 ||
          !(young_opts.x_min < young_opts.x_max))
        throw ConfigError("young: bins must be >= 1 and x_min < x_max");
      return cmd_young(cfg, young_opts);
    }
    RunConfig cfg = merge_config(print_cmd, print_v);
    std::fputs(serialize_config(cfg).c_str(), stdout);
    return 0;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

/// Convenience entry point for tests: argv built from strings, program
/// name supplied here.
inline int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("flume");
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run_cli(int(argv.size()), argv.data());
}

}  // namespace flume

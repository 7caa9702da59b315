/**
 * @file acceptance_main.cpp
 * @brief End-to-end acceptance gate. Prints one pass/fail line per
 *        criterion and exits nonzero if any fails.
 *
 * Usage: flume_acceptance [criterion numbers...]
 * With no arguments every criterion runs in order. Criteria 4 and 5
 * share one ensemble run; criterion 8 runs the four reference presets at
 * full scale and dominates the wall time.
 */

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "flume/flume.hpp"

using namespace flume;

namespace {

// Pinned tolerances.
//
// kIdentityRel: the Gauss-Jacobi rule is exact for the polynomial
//   generators tested, so 1e-10 relative leaves five orders of headroom
//   over accumulated roundoff.
// kConstantTol: closed-form normalization constants are a handful of
//   float operations; 1e-12 absolute.
// kOracleTol: the trapezoid oracle on the sqrt-singular weight converges
//   like N^(-3/2); 1e6 points give ~1e-9, so 1e-8.
// kHeatTol / kHeatKernelTol: spectral identities hold to roundoff; the
//   periodized-kernel comparison inherits the kernel's own truncation.
// kDriftRel: conservation drifts accumulate at most ~1e3 roundoff-sized
//   flux cancellations; 1e-12 relative.
// kAtomTol: the single-atom functional-equation residual cancels
//   identically in floating point; 1e-12 absolute.
// kScoreRel: uniform-histogram score, 2 percent.
constexpr double kIdentityRel = 1e-10;
constexpr double kConstantTol = 1e-12;
constexpr double kOracleTol = 1e-8;
constexpr double kHeatTol = 1e-12;
constexpr double kHeatKernelTol = 1e-10;
constexpr double kDriftRel = 1e-12;
constexpr double kAtomTol = 1e-12;
constexpr double kScoreRel = 0.02;

int g_passed = 0;
int g_failed = 0;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

void record(int idx, const char* what, bool ok, const std::string& detail) {
  std::printf("[%d] %s: %s%s%s\n", idx, what, ok ? "pass" : "FAIL",
              detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  (ok ? g_passed : g_failed) += 1;
}

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

// ---------------------------------------------------------------------------
// [1] Entropy identities, normalization constants, moment lower bound.
// ---------------------------------------------------------------------------

bool criterion1(std::string& detail) {
  Timer timer;
  std::mt19937_64 rng(20240816);
  double worst = 0.0;
  bool bound_ok = true;

  for (double gamma : {1.4, 2.0, 3.0}) {
    GasLaw law = GasLaw::normalized(gamma);
    JacobiQuadrature quad = JacobiQuadrature::build(law.lambda);
    std::uniform_real_distribution<double> rho_d(0.05, 5.0);
    std::uniform_real_distribution<double> u_d(-5.0, 5.0);
    for (int s = 0; s < 1000; ++s) {
      double rho = rho_d(rng), u = u_d(rng), q = rho * u;
      EntropyValue mass = eval_pair(law, quad, mass_kernel(), rho, u);
      EntropyValue mom = eval_pair(law, quad, momentum_kernel(), rho, u);
      EntropyValue en = eval_pair(law, quad, energy_kernel(), rho, u);
      worst = std::max(worst, rel_err(mass.eta, rho));
      worst = std::max(worst, rel_err(mass.h_flux, q));
      worst = std::max(worst, rel_err(mom.eta, q));
      worst = std::max(worst, rel_err(mom.h_flux, q * u + pressure(law, rho)));
      worst = std::max(worst, rel_err(en.eta, energy(law, rho, u)));
      worst = std::max(worst, rel_err(en.h_flux, energy_flux(law, rho, u)));

      // Lower bound for the even-moment entropies. The normalization
      // constant belongs on the density term: at u = 0 the moment
      // entropy is exactly rho^(1 + 2 theta m) d_lambda(m), so a bare
      // rho^(2 theta m) term would already be unreachable there.
      for (int m = 1; m <= 4; ++m) {
        double eta_m = eval_pair(law, quad, moment_kernel(m), rho, u).eta;
        double bound = rho * (std::pow(u, 2 * m) +
                              d_lambda(law, m) * std::pow(rho, 2.0 * law.theta * m));
        if (eta_m < bound * (1.0 - 1e-12)) bound_ok = false;
      }
    }
  }

  // Normalization constants at gamma = 2 (lambda = 1/2): closed forms,
  // then an independent trapezoid of the defining integrals.
  GasLaw law2 = GasLaw::normalized(2.0);
  double pi = std::acos(-1.0);
  bool const_ok = std::abs(law2.c_lambda - 2.0 / pi) <= kConstantTol &&
                  std::abs(d_lambda(law2, 1) - 0.25) <= kConstantTol;
  const long n_trap = 1000000;
  double h = 2.0 / n_trap, s0 = 0.0, s2 = 0.0;
  for (long i = 0; i <= n_trap; ++i) {
    double z = -1.0 + double(i) * h;
    double w = (i == 0 || i == n_trap) ? 0.5 : 1.0;
    double v = std::sqrt(std::max(0.0, 1.0 - z * z));
    s0 += w * v;
    s2 += w * z * z * v;
  }
  s0 *= h;
  s2 *= h;
  bool oracle_ok = std::abs(1.0 / s0 - law2.c_lambda) <= kOracleTol &&
                   std::abs(s2 / s0 - d_lambda(law2, 1)) <= kOracleTol;

  double secs = timer.seconds();
  detail = "worst identity rel " + num(worst) + ", trapezoid gap " +
           num(std::abs(1.0 / s0 - law2.c_lambda)) + ", " + num(secs) + " s";
  return worst <= kIdentityRel && bound_ok && const_ok && oracle_ok && secs < 5.0;
}

// ---------------------------------------------------------------------------
// [2] Heat semigroup: composition, per-mode decay, maximum principle,
//     agreement with an independent wrapped-Gaussian convolution.
// ---------------------------------------------------------------------------

std::vector<double> random_field(int n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> f(static_cast<std::size_t>(n));
  for (double& v : f) v = d(gen);
  return f;
}

bool criterion2(std::string& detail) {
  Timer timer;
  const int n = 256;
  double worst_semi = 0.0, worst_mode = 0.0, worst_max = 0.0, worst_kernel = 0.0;

  std::vector<double> f = random_field(n, 21);
  std::vector<double> two = heat_apply(heat_apply(f, 1.0, 3e-3), 1.0, 1.7e-2);
  std::vector<double> one = heat_apply(f, 1.0, 2e-2);
  for (int i = 0; i < n; ++i) worst_semi = std::max(worst_semi, std::abs(two[i] - one[i]));

  double pi = std::acos(-1.0);
  for (int k : {1, 5, 19}) {
    std::vector<double> mode(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) mode[std::size_t(i)] = std::sin(2.0 * pi * k * (i + 0.5) / n);
    double t = 4e-3;
    std::vector<double> g = heat_apply(mode, 1.0, t);
    double decay = std::exp(-4.0 * pi * pi * k * k * t);
    for (int i = 0; i < n; ++i)
      worst_mode = std::max(worst_mode, std::abs(g[std::size_t(i)] - decay * mode[std::size_t(i)]));
  }

  std::vector<double> r = random_field(n, 22);
  double lo = r[0], hi = r[0];
  for (double v : r) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  for (double t : {1e-3, 1e-1}) {
    std::vector<double> g = heat_apply(r, 1.0, t);
    for (double v : g) worst_max = std::max(worst_max, std::max(lo - v, v - hi));
  }

  // Independent oracle: convolution with the wrapped Gaussian, truncated
  // well past the kernel's own support window.
  double t = 1e-2;
  std::vector<double> spec = heat_apply(r, 1.0, t);
  int wrap = 2 + int(std::ceil(12.0 * std::sqrt(t)));
  auto wrapped = [&](double x) {
    double s = 0.0;
    for (int j = -wrap; j <= wrap; ++j)
      s += std::exp(-(x + j) * (x + j) / (4.0 * t));
    return s / std::sqrt(4.0 * pi * t);
  };
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) acc += wrapped((i - j) / double(n)) * r[std::size_t(j)];
    worst_kernel = std::max(worst_kernel, std::abs(spec[std::size_t(i)] - acc / n));
  }

  double secs = timer.seconds();
  detail = "semigroup " + num(worst_semi) + ", mode decay " + num(worst_mode) +
           ", max principle " + num(worst_max) + ", kernel " + num(worst_kernel) + ", " +
           num(secs) + " s";
  return worst_semi <= kHeatTol && worst_mode <= kHeatTol && worst_max <= kHeatTol &&
         worst_kernel <= kHeatKernelTol && secs < 5.0;
}

// ---------------------------------------------------------------------------
// [3] Per-realization conservation over a full resting-state run.
// ---------------------------------------------------------------------------

bool criterion3(std::string& detail) {
  Timer timer;
  RunConfig rc = load_preset("test3");
  rc.cells = 128;
  GasLaw law = make_gas_law(rc);
  Grid grid(rc.cells);
  NoiseModel noise = make_noise(rc);
  BakedNoise baked = BakedNoise::bake(noise, grid);
  SchemeConfig scheme = make_scheme(rc);

  double worst_mass = 0.0, worst_mom = 0.0;
  for (std::uint32_t r = 0; r < 16; ++r) {
    ConservedField f = make_initial(rc, grid);
    const double m0 = total_mass(grid, f);
    split_advance(law, grid, f, noise, baked, scheme, rc.seed, r, 500,
                  [&](long, double, SplitPhase phase, const ConservedField&,
                      const StepReport& rep) {
                    worst_mass = std::max(
                        worst_mass, std::abs(rep.mass_after - m0) / std::max(1.0, std::abs(m0)));
                    if (phase == SplitPhase::deterministic)
                      worst_mom = std::max(worst_mom,
                                           std::abs(rep.momentum_after - rep.momentum_before) /
                                               std::max(1.0, std::abs(rep.momentum_before)));
                  });
  }

  double secs = timer.seconds();
  detail = "mass drift " + num(worst_mass) + ", det momentum drift " + num(worst_mom) + ", " +
           num(secs) + " s";
  return worst_mass <= kDriftRel && worst_mom <= kDriftRel && secs < 60.0;
}

// ---------------------------------------------------------------------------
// Shared full-ensemble run for criteria 4 and 5 (resting preset, 256
// sample paths, horizon 2, a row every period).
// ---------------------------------------------------------------------------

struct SharedRun {
  EnsembleResult res;
  double seconds = 0.0;
};

const SharedRun& momentum_energy_run() {
  static SharedRun shared = [] {
    Timer timer;
    RunConfig rc = load_preset("test3");
    rc.horizon = 2.0;
    rc.output_stride = 1;
    GasLaw law = make_gas_law(rc);
    Grid grid(rc.cells);
    EnsembleConfig ec = make_ensemble(rc);
    ec.keep_energy_series = true;
    SharedRun s;
    s.res = run_ensemble(law, grid, make_initial(rc, grid), make_noise(rc), ec);
    s.seconds = timer.seconds();
    return s;
  }();
  return shared;
}

bool criterion4(std::string& detail) {
  const SharedRun& shared = momentum_energy_run();
  MomentumTestReport rep = momentum_conservation_test(shared.res);
  double worst_ratio = 0.0;
  for (const MomentumCheck& c : rep.checks)
    if (c.band > 0.0) worst_ratio = std::max(worst_ratio, std::abs(c.drift) / c.band);
  bool ok = rep.status == MomentumTestStatus::passed && shared.seconds < 900.0;
  detail = "worst |drift|/band " + num(worst_ratio) + " over " + std::to_string(rep.checks.size()) +
           " times, shared run " + num(shared.seconds) + " s";
  return ok;
}

// Per-realization least-squares slope of the energy over the row index
// range [j0, j1]. Realizations are independent, so the spread of the
// per-realization slopes gives the Monte Carlo standard error of the
// mean slope; within-realization time correlation does not enter.
void slope_stats(const EnsembleResult& res, std::size_t j0, std::size_t j1, double& mean,
                 double& se) {
  const std::size_t n_real = res.energy_series.size();
  const std::size_t m = j1 - j0 + 1;
  double tm = 0.0;
  for (std::size_t j = j0; j <= j1; ++j) tm += res.rows[j].t;
  tm /= double(m);
  double stt = 0.0;
  for (std::size_t j = j0; j <= j1; ++j) {
    double d = res.rows[j].t - tm;
    stt += d * d;
  }
  std::vector<double> slopes(n_real);
  for (std::size_t r = 0; r < n_real; ++r) {
    const std::vector<double>& e = res.energy_series[r];
    double em = 0.0;
    for (std::size_t j = j0; j <= j1; ++j) em += e[j];
    em /= double(m);
    double ste = 0.0;
    for (std::size_t j = j0; j <= j1; ++j) ste += (res.rows[j].t - tm) * (e[j] - em);
    slopes[r] = ste / stt;
  }
  mean = 0.0;
  for (double s : slopes) mean += s;
  mean /= double(n_real);
  double var = 0.0;
  for (double s : slopes) var += (s - mean) * (s - mean);
  var /= double(n_real - 1);
  se = std::sqrt(var / double(n_real));
}

bool criterion5(std::string& detail) {
  const SharedRun& shared = momentum_energy_run();
  const EnsembleResult& res = shared.res;
  const std::vector<TimeSeriesRow>& rows = res.rows;
  const std::size_t n_real = res.energy_series.size();
  if (n_real < 2) {
    detail = "energy series missing from the shared run";
    return false;
  }
  const double rate = rows.front().ito_injection_rate;

  // Pointwise Monte Carlo standard error of the mean energy at each row.
  std::vector<double> se_pt(rows.size(), 0.0);
  for (std::size_t j = 0; j < rows.size(); ++j) {
    double var = 0.0;
    for (std::size_t r = 0; r < n_real; ++r) {
      double d = res.energy_series[r][j] - rows[j].mean_energy;
      var += d * d;
    }
    var /= double(n_real - 1);
    se_pt[j] = std::sqrt(var / double(n_real));
  }

  // Smooth window: the prefix of times (capped at t = 0.2) where the mean
  // energy still tracks the exact injection line within one pointwise
  // standard error. One standard error, not three: the window sets how
  // much systematic dissipation bias the slope fit may ingest, and it
  // must stay below the three-standard-error band tested afterwards.
  std::size_t last = 1;
  for (std::size_t j = 1; j < rows.size() && rows[j].t <= 0.2 + 1e-12; ++j) {
    double resid = rows[j].mean_energy - rows[0].mean_energy - rate * rows[j].t;
    if (std::abs(resid) > se_pt[j]) break;
    last = j;
  }

  double early_slope = 0.0, early_se = 0.0;
  slope_stats(res, 0, last, early_slope, early_se);
  bool early_ok = std::abs(early_slope - rate) <= 3.0 * early_se;

  // After shocks: the measured slope must sit below the injection rate
  // beyond its confidence band (dissipation strictly active).
  std::size_t lo = 0, hi = 0;
  for (std::size_t j = 0; j < rows.size(); ++j) {
    if (rows[j].t < 1.0 - 1e-12) lo = j + 1;
    if (rows[j].t <= 2.0 + 1e-12) hi = j;
  }
  double late_slope = 0.0, late_se = 0.0;
  slope_stats(res, lo, hi, late_slope, late_se);
  bool late_ok = late_slope < rate && (rate - late_slope) > 3.0 * late_se;

  detail = "window [0," + num(rows[last].t) + "] (" + std::to_string(last + 1) +
           " rows) slope " + num(early_slope) + " +- " + num(early_se) + " vs rate " +
           num(rate) + ", late slope " + num(late_slope) + " +- " + num(late_se);
  return early_ok && late_ok;
}

// ---------------------------------------------------------------------------
// [6] Localized noise keeps every cell inside the doubled invariant region.
// ---------------------------------------------------------------------------

bool criterion6(std::string& detail) {
  Timer timer;
  const int n = 128;
  GasLaw law = GasLaw::normalized(2.0);
  Grid grid(n);
  ConservedField f0 = make_field(std::vector<double>(n, 1.0), std::vector<double>(n, 0.0));
  NoiseModel noise = NoiseModel::generic_multiplicative(1.0, 4).localized(4.0, 0.25);

  EnsembleConfig cfg;
  cfg.n_realizations = 16;
  cfg.master_seed = 2024;
  cfg.horizon = 1.0;
  cfg.output_stride = 50;
  cfg.scheme.kappa_bound = 8.0;  // the doubled region for the kappa = 4 localization
  EnsembleResult res = run_ensemble(law, grid, f0, noise, cfg);

  long violations = res.rows.back().invariant_violations;
  double secs = timer.seconds();
  detail = std::to_string(violations) + " cells escaped, " + num(secs) + " s";
  return violations == 0;
}

// ---------------------------------------------------------------------------
// [7] Positivity and the controlling quantities of the viscous regime.
// ---------------------------------------------------------------------------

bool criterion7(std::string& detail) {
  Timer timer;
  RunConfig rc = load_preset("test3");
  rc.realizations = 16;
  rc.horizon = 1.0;
  rc.output_stride = 50;
  GasLaw law = make_gas_law(rc);
  Grid grid(rc.cells);
  EnsembleResult res =
      run_ensemble(law, grid, make_initial(rc, grid), make_noise(rc), make_ensemble(rc));

  double min_rho = res.rows.front().min_rho;
  for (const TimeSeriesRow& r : res.rows) min_rho = std::min(min_rho, r.min_rho);
  bool finite = std::isfinite(res.mean_grad_energy) && std::isfinite(res.max_velocity_l8);

  double secs = timer.seconds();
  detail = "min rho " + num(min_rho) + ", grad energy " + num(res.mean_grad_energy) +
           ", |u|_L8 " + num(res.max_velocity_l8) + ", " + num(secs) + " s";
  return min_rho > 0.0 && finite && res.mean_grad_energy >= 0.0;
}

// ---------------------------------------------------------------------------
// [8] Four reference presets: within-pair agreement and between-group
//     separation of the time-averaged energy at the horizon.
// ---------------------------------------------------------------------------

struct LevelStats {
  double mean = 0.0;
  double se = 0.0;
  std::vector<double> values;
};

LevelStats level_stats(std::vector<double> values) {
  LevelStats s;
  s.values = std::move(values);
  for (double v : s.values) s.mean += v;
  s.mean /= double(s.values.size());
  double ss = 0.0;
  for (double v : s.values) ss += (v - s.mean) * (v - s.mean);
  s.se = std::sqrt(ss / double(s.values.size() - 1) / double(s.values.size()));
  return s;
}

bool criterion8(std::string& detail) {
  Timer timer;
  std::vector<LevelStats> levels;
  for (const char* id : {"test1", "test2", "test3", "test4"}) {
    RunConfig rc = load_preset(id);
    rc.output_stride = 500;
    GasLaw law = make_gas_law(rc);
    Grid grid(rc.cells);
    EnsembleResult res =
        run_ensemble(law, grid, make_initial(rc, grid), make_noise(rc), make_ensemble(rc));
    levels.push_back(level_stats(res.final_time_avg));
    std::printf("  note [8] %s: time-avg energy at t=10 is %.6f (se %.6f), elapsed %.0f s\n",
                id, levels.back().mean, levels.back().se, timer.seconds());
    std::fflush(stdout);
  }

  auto gap = [](const LevelStats& a, const LevelStats& b) {
    return std::abs(a.mean - b.mean) / std::hypot(a.se, b.se);
  };
  double gap12 = gap(levels[0], levels[1]);
  double gap34 = gap(levels[2], levels[3]);

  std::vector<double> ga = levels[0].values, gb = levels[2].values;
  ga.insert(ga.end(), levels[1].values.begin(), levels[1].values.end());
  gb.insert(gb.end(), levels[3].values.begin(), levels[3].values.end());
  LevelStats pooled_a = level_stats(std::move(ga));
  LevelStats pooled_b = level_stats(std::move(gb));
  double gap_groups = gap(pooled_a, pooled_b);

  double secs = timer.seconds();
  detail = "pair gaps " + num(gap12) + " and " + num(gap34) +
           " sigma (need <= 3), group gap " + num(gap_groups) + " sigma (need > 3), " +
           num(secs / 3600.0) + " h";
  // The published budget is two hours on eight cores; this gate runs
  // single-threaded, so the equivalent core budget is sixteen hours.
  return gap12 <= 3.0 && gap34 <= 3.0 && gap_groups > 3.0 && secs < 16.0 * 3600.0;
}

// ---------------------------------------------------------------------------
// [9] Byte-identical outputs for identical configuration and seed.
// ---------------------------------------------------------------------------

std::string read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool criterion9(std::string& detail) {
  Timer timer;
  namespace fs = std::filesystem;
  fs::path base = fs::temp_directory_path() / "flume_acceptance_repro";
  fs::remove_all(base);
  std::vector<std::string> stats, snaps;
  for (const char* sub : {"a", "b"}) {
    fs::path dir = base / sub;
    int code = run_cli({"run", "--preset", "test3", "--cells", "64", "--realizations", "16",
                        "--horizon", "0.1", "--seed", "77", "--snapshots", "--out",
                        dir.string()});
    if (code != 0) {
      detail = "run exited with code " + std::to_string(code);
      return false;
    }
    stats.push_back(read_bytes(dir / "stats.csv"));
    snaps.push_back(read_bytes(dir / "snapshots.bin"));
  }
  bool ok = !stats[0].empty() && stats[0] == stats[1] && !snaps[0].empty() &&
            snaps[0] == snaps[1];
  detail = std::to_string(stats[0].size()) + " csv bytes, " + std::to_string(snaps[0].size()) +
           " snapshot bytes, " + num(timer.seconds()) + " s";
  return ok;
}

// ---------------------------------------------------------------------------
// [10] Empirical-measure diagnostics: exact single-atom residual and the
//      uniform-histogram score level.
// ---------------------------------------------------------------------------

bool criterion10(std::string& detail) {
  GasLaw law = GasLaw::shallow_water(2.0);
  Grid grid(16);
  JacobiQuadrature quad = JacobiQuadrature::build(law.lambda);

  // Single atom: every sample the same non-vacuum state.
  SnapshotStore atom;
  atom.n_cells = 16;
  for (std::uint32_t r = 0; r < 2; ++r) {
    SnapshotRecord rec;
    rec.realization_id = r;
    rec.step = 0;
    rec.rho.assign(16, 0.9);
    rec.q.assign(16, 0.45);
    atom.records.push_back(rec);
  }
  YoungWindow win;
  YoungHistogram h1 = young_histogram(law, grid, atom, win, 8, 8, 1e-6);
  double score1 = dirac_or_vacuum_score(h1);
  double resid = functional_equation_residual(law, quad, h1, energy_kernel(), momentum_kernel());

  // Sixteen states placed one per bin of a 4 x 4 grid in (w, z).
  SnapshotStore spread;
  spread.n_cells = 16;
  SnapshotRecord rec;
  rec.realization_id = 0;
  rec.step = 0;
  for (int iw = 0; iw < 4; ++iw)
    for (int iz = 0; iz < 4; ++iz) {
      double w = 2.0 + 0.2 * iw;
      double z = -2.6 + 0.2 * iz;
      double rho = density_from_invariants(law, z, w);
      rec.rho.push_back(rho);
      rec.q.push_back(rho * 0.5 * (z + w));
    }
  spread.records.push_back(rec);
  YoungHistogram h2 = young_histogram(law, grid, spread, win, 4, 4, 1e-6);
  double score2 = dirac_or_vacuum_score(h2);

  detail = "atom residual " + num(std::abs(resid)) + ", atom score " + num(score1) +
           ", uniform score " + num(score2) + " vs 1/16";
  return std::abs(resid) <= kAtomTol && score1 == 1.0 &&
         std::abs(score2 - 1.0 / 16.0) <= kScoreRel / 16.0;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> filter;
  for (int i = 1; i < argc; ++i) filter.insert(std::atoi(argv[i]));
  auto wanted = [&](int idx) { return filter.empty() || filter.count(idx) > 0; };

  struct Entry {
    int idx;
    const char* what;
    std::function<bool(std::string&)> fn;
  };
  const std::vector<Entry> entries = {
      {1, "entropy identities, constants, moment bounds", criterion1},
      {2, "heat semigroup suite", criterion2},
      {3, "per-realization conservation", criterion3},
      {4, "mean momentum conservation", criterion4},
      {5, "energy injection balance", criterion5},
      {6, "invariant region under localized noise", criterion6},
      {7, "density positivity and controlling quantities", criterion7},
      {8, "reference preset convergence pattern", criterion8},
      {9, "byte-identical reruns", criterion9},
      {10, "empirical-measure diagnostics", criterion10},
  };

  for (const Entry& e : entries) {
    if (!wanted(e.idx)) continue;
    std::string detail;
    bool ok = false;
    try {
      ok = e.fn(detail);
    } catch (const std::exception& ex) {
      detail = std::string("exception: ") + ex.what();
    }
    record(e.idx, e.what, ok, detail);
  }

  std::printf("acceptance: %d passed, %d failed\n", g_passed, g_failed);
  return g_failed == 0 ? 0 : 1;
}

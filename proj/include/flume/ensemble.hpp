/**
 * @file ensemble.hpp
 * @brief Monte Carlo driver over noise realizations plus the statistical
 *        diagnostics: energy balance, momentum conservation in mean, and
 *        the empirical (w, z) measure with its concentration scores.
 *
 * Realizations run concurrently but every aggregate is produced by a
 * fixed-shape pairwise reduction over realization ids, so results are
 * bit-identical for any thread count.
 */
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "flume/dynamics.hpp"
#include "flume/entropy.hpp"
#include "flume/gas_law.hpp"
#include "flume/grid.hpp"
#include "flume/noise.hpp"
#include "flume/snapshot.hpp"
#include "flume/state.hpp"

namespace flume {

struct EnsembleConfig {
  int n_realizations = 1;
  std::uint64_t master_seed = 0;
  double horizon = 1.0;      ///< whole number of splitting periods (2 tau)
  long output_stride = 1;    ///< periods between recorded rows
  long snapshot_stride = 0;  ///< recorded rows between stored snapshots; 0 disables
  int n_threads = 0;         ///< 0 picks the hardware concurrency
  bool keep_energy_series = false;  ///< retain per-realization energy rows in the result
  SchemeConfig scheme;
};

/// One recorded time in the ensemble statistics; the CSV emits these
/// columns in this order.
struct TimeSeriesRow {
  double t = 0.0;
  double mean_energy = 0.0;       ///< E of integral of eta_E dx
  double time_avg_energy = 0.0;   ///< E of (1/t) int_0^t of that, trapezoidal
  double mean_mass = 0.0;
  double mean_momentum = 0.0;
  double momentum_stderr = 0.0;
  double min_rho = 0.0;           ///< over the ensemble and the interval since the last row
  double ito_injection_rate = 0.0;
  long invariant_violations = 0;  ///< cumulative over all half-steps and realizations
};

struct EnsembleResult {
  std::vector<TimeSeriesRow> rows;
  SnapshotStore snapshots;
  std::vector<double> final_time_avg;  ///< per realization, at the horizon
  /// Per-realization energy at each recorded row, [realization][row];
  /// empty unless EnsembleConfig::keep_energy_series was set.
  std::vector<std::vector<double>> energy_series;
  double mean_grad_energy = 0.0;  ///< E of int rho |du/dx|^2 dx dt over viscous intervals
  double max_velocity_l8 = 0.0;   ///< max over rows/realizations of the L^8 norm of u
  double max_det_momentum_drift = 0.0;  ///< worst |momentum_after - before| of a viscous step
  int n_realizations = 0;
  long n_periods = 0;
};

class EnsembleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double total_energy(const GasLaw& law, const Grid& grid, const ConservedField& f) {
  double s = 0.0;
  for (int i = 0; i < f.size(); ++i)
    s += energy(law, f.rho[i], velocity(f.rho[i], f.q[i]));
  return s * grid.dx;
}

/// Ito drift of the mean energy: (1/2) int G^2 d2_qq eta_E dx with
/// d2_qq eta_E = 1 / rho; vacuum cells contribute nothing because the
/// coefficients vanish there.
inline double ito_injection_rate(const GasLaw& law, const Grid& grid,
                                 const NoiseModel& noise, const BakedNoise& baked,
                                 const ConservedField& f) {
  double s = 0.0;
  for (int i = 0; i < f.size(); ++i) {
    double rho = f.rho[i];
    if (rho <= 0.0) continue;
    double factor = noise.state_factor(rho);
    if (noise.localization()) {
      double z = 0.0, w = 0.0;
      riemann_invariants_cell(law, rho, f.q[i], z, w);
      factor *= localization_weight(*noise.localization(), z, w);
    }
    s += factor * factor * baked.profile_sq_sum[i] / rho;
  }
  return 0.5 * s * grid.dx;
}

namespace detail {

struct RowSample {
  double energy = 0.0;
  double time_avg = 0.0;
  double mass = 0.0;
  double momentum = 0.0;
  double min_rho = 0.0;
  double ito = 0.0;
  long violations = 0;
};

struct RealizationSeries {
  std::vector<RowSample> rows;
  std::vector<SnapshotRecord> snaps;
  double grad_energy = 0.0;
  double max_l8 = 0.0;
  double max_det_drift = 0.0;
  std::string error;
};

struct RowAccum {
  double energy = 0.0, time_avg = 0.0, mass = 0.0, momentum = 0.0;
  double momentum_m2 = 0.0;  ///< sum of squared deviations, pairwise-merged
  long count = 0;
  double ito = 0.0;
  double min_rho = std::numeric_limits<double>::infinity();
  long violations = 0;
};

struct ScalarAccum {
  double grad_energy = 0.0;
  double max_l8 = 0.0;
  double max_det_drift = 0.0;
};

inline double velocity_l8(const Grid& grid, const ConservedField& f) {
  double s = 0.0;
  for (int i = 0; i < f.size(); ++i) {
    double u = velocity(f.rho[i], f.q[i]);
    double u2 = u * u;
    s += u2 * u2 * u2 * u2;
  }
  return std::pow(s * grid.dx, 0.125);
}

}  // namespace detail

inline void validate(const GasLaw& law, const Grid& grid, const ConservedField& initial,
                     const EnsembleConfig& cfg, long& n_periods_out) {
  validate(cfg.scheme);
  (void)law;
  if (initial.size() != grid.n_cells)
    throw std::invalid_argument("ensemble: initial field does not match the grid");
  if (cfg.n_realizations < 1)
    throw std::invalid_argument("ensemble: need at least one realization");
  if (cfg.output_stride < 1) throw std::invalid_argument("ensemble: output_stride >= 1");
  if (cfg.snapshot_stride < 0) throw std::invalid_argument("ensemble: snapshot_stride >= 0");
  if (cfg.n_threads < 0) throw std::invalid_argument("ensemble: n_threads >= 0");
  double period = 2.0 * cfg.scheme.tau;
  double ratio = cfg.horizon / period;
  long n_periods = std::llround(ratio);
  if (n_periods < 1 || std::abs(double(n_periods) - ratio) > 1e-9 * std::max(1.0, ratio))
    throw std::invalid_argument(
        "ensemble: horizon must be a whole positive number of splitting periods");
  n_periods_out = n_periods;
}

/// Runs n_realizations independent trajectories and reduces their
/// statistics. Any realization failure aborts the whole ensemble with an
/// EnsembleError naming the first failure.
inline EnsembleResult run_ensemble(const GasLaw& law, const Grid& grid,
                                   const ConservedField& initial, const NoiseModel& noise,
                                   const EnsembleConfig& cfg) {
  long n_periods = 0;
  validate(law, grid, initial, cfg, n_periods);
  const BakedNoise baked = BakedNoise::bake(noise, grid);
  const int n_real = cfg.n_realizations;
  const long stride = cfg.output_stride;

  std::vector<detail::RealizationSeries> series(static_cast<std::size_t>(n_real));

  auto run_one = [&](int r) {
    detail::RealizationSeries& out = series[std::size_t(r)];
    ConservedField f = initial;
    long cum_viol = 0;
    if (cfg.scheme.kappa_bound)
      cum_viol = in_invariant_region(riemann_invariants(law, f), *cfg.scheme.kappa_bound)
                     .violations;
    double interval_min = *std::min_element(f.rho.begin(), f.rho.end());
    double energy_prev = total_energy(law, grid, f);
    double trapezoid = 0.0;
    long row_index = 0;

    auto record_row = [&](double t, double energy_now) {
      detail::RowSample row;
      row.energy = energy_now;
      row.time_avg = (t == 0.0) ? energy_now : trapezoid / t;
      row.mass = total_mass(grid, f);
      row.momentum = total_momentum(grid, f);
      row.min_rho = interval_min;
      row.ito = ito_injection_rate(law, grid, noise, baked, f);
      row.violations = cum_viol;
      out.rows.push_back(row);
      out.max_l8 = std::max(out.max_l8, detail::velocity_l8(grid, f));
      if (cfg.snapshot_stride > 0 && row_index % cfg.snapshot_stride == 0) {
        SnapshotRecord rec;
        rec.realization_id = std::uint32_t(r);
        rec.step = std::uint32_t(std::llround(t / cfg.scheme.tau));
        rec.rho = f.rho;
        rec.q = f.q;
        out.snaps.push_back(std::move(rec));
      }
      ++row_index;
      interval_min = std::numeric_limits<double>::infinity();
    };

    record_row(0.0, energy_prev);
    split_advance(
        law, grid, f, noise, baked, cfg.scheme, cfg.master_seed, std::uint32_t(r),
        n_periods,
        [&](long k, double t, SplitPhase phase, const ConservedField& state,
            const StepReport& rep) {
          (void)state;
          cum_viol += rep.invariant_violation_count;
          interval_min = std::min(interval_min, rep.min_rho);
          if (phase == SplitPhase::deterministic) {
            out.grad_energy += rep.grad_energy_increment;
            out.max_det_drift = std::max(
                out.max_det_drift, std::abs(rep.momentum_after - rep.momentum_before));
            return;
          }
          long p = k / 2;
          double energy_now = total_energy(law, grid, f);
          trapezoid += cfg.scheme.tau * (energy_prev + energy_now);
          energy_prev = energy_now;
          if (p % stride == 0 || p == n_periods) record_row(t, energy_now);
        });
  };

  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  int n_threads = cfg.n_threads > 0 ? cfg.n_threads : int(hw);
  n_threads = std::min(n_threads, n_real);
  std::atomic<int> next{0};
  {
    std::vector<std::jthread> pool;
    pool.reserve(std::size_t(n_threads));
    for (int w = 0; w < n_threads; ++w)
      pool.emplace_back([&] {
        for (int r = next.fetch_add(1); r < n_real; r = next.fetch_add(1)) {
          try {
            run_one(r);
          } catch (const std::exception& e) {
            series[std::size_t(r)].error = e.what();
          }
        }
      });
  }

  long failures = 0;
  std::string first_error;
  for (const auto& s : series)
    if (!s.error.empty()) {
      if (failures == 0) first_error = s.error;
      ++failures;
    }
  if (failures > 0)
    throw EnsembleError(std::to_string(failures) + " of " + std::to_string(n_real) +
                        " realizations failed; first: " + first_error);

  const std::size_t n_rows = series[0].rows.size();
  for (const auto& s : series)
    if (s.rows.size() != n_rows)
      throw EnsembleError("realizations recorded differing row counts");

  // Fixed-shape pairwise reduction over realization ids. The tree depends
  // only on n_realizations, so the result is independent of thread count
  // and schedule.
  struct Accum {
    std::vector<detail::RowAccum> rows;
    detail::ScalarAccum scalars;
  };
  auto leaf = [&](int r) {
    Accum a;
    a.rows.resize(n_rows);
    const auto& s = series[std::size_t(r)];
    for (std::size_t j = 0; j < n_rows; ++j) {
      const detail::RowSample& x = s.rows[j];
      detail::RowAccum& y = a.rows[j];
      y.energy = x.energy;
      y.time_avg = x.time_avg;
      y.mass = x.mass;
      y.momentum = x.momentum;
      y.momentum_m2 = 0.0;
      y.count = 1;
      y.ito = x.ito;
      y.min_rho = x.min_rho;
      y.violations = x.violations;
    }
    a.scalars.grad_energy = s.grad_energy;
    a.scalars.max_l8 = s.max_l8;
    a.scalars.max_det_drift = s.max_det_drift;
    return a;
  };
  auto combine = [&](Accum a, const Accum& b) {
    for (std::size_t j = 0; j < n_rows; ++j) {
      detail::RowAccum& y = a.rows[j];
      const detail::RowAccum& x = b.rows[j];
      y.energy += x.energy;
      y.time_avg += x.time_avg;
      y.mass += x.mass;
      // Chan et al. pairwise merge keeps deviations exact when the two
      // halves agree, so identical realizations report zero spread.
      double delta = y.momentum / double(y.count) - x.momentum / double(x.count);
      y.momentum_m2 += x.momentum_m2 + delta * delta * double(y.count) * double(x.count) /
                                           double(y.count + x.count);
      y.momentum += x.momentum;
      y.count += x.count;
      y.ito += x.ito;
      y.min_rho = std::min(y.min_rho, x.min_rho);
      y.violations += x.violations;
    }
    a.scalars.grad_energy += b.scalars.grad_energy;
    a.scalars.max_l8 = std::max(a.scalars.max_l8, b.scalars.max_l8);
    a.scalars.max_det_drift = std::max(a.scalars.max_det_drift, b.scalars.max_det_drift);
    return a;
  };
  auto reduce = [&](auto&& self, int lo, int hi) -> Accum {
    if (hi - lo == 1) return leaf(lo);
    int mid = lo + (hi - lo) / 2;
    return combine(self(self, lo, mid), self(self, mid, hi));
  };
  Accum total = reduce(reduce, 0, n_real);

  EnsembleResult res;
  res.n_realizations = n_real;
  res.n_periods = n_periods;
  res.rows.resize(n_rows);
  const double inv_n = 1.0 / double(n_real);
  for (std::size_t j = 0; j < n_rows; ++j) {
    const detail::RowAccum& a = total.rows[j];
    TimeSeriesRow& row = res.rows[j];
    long p = std::min(long(j) * stride, n_periods);
    row.t = (j == 0) ? 0.0 : double(p) * 2.0 * cfg.scheme.tau;
    row.mean_energy = a.energy * inv_n;
    row.time_avg_energy = a.time_avg * inv_n;
    row.mean_mass = a.mass * inv_n;
    row.mean_momentum = a.momentum * inv_n;
    if (n_real >= 2) {
      double var = a.momentum_m2 / double(n_real - 1);
      row.momentum_stderr = std::sqrt(std::max(0.0, var) / double(n_real));
    }
    row.min_rho = a.min_rho;
    row.ito_injection_rate = a.ito * inv_n;
    row.invariant_violations = a.violations;
  }
  res.mean_grad_energy = total.scalars.grad_energy * inv_n;
  res.max_velocity_l8 = total.scalars.max_l8;
  res.max_det_momentum_drift = total.scalars.max_det_drift;

  res.final_time_avg.resize(std::size_t(n_real));
  for (int r = 0; r < n_real; ++r)
    res.final_time_avg[std::size_t(r)] = series[std::size_t(r)].rows.back().time_avg;

  if (cfg.keep_energy_series) {
    res.energy_series.resize(std::size_t(n_real));
    for (int r = 0; r < n_real; ++r) {
      auto& dst = res.energy_series[std::size_t(r)];
      dst.reserve(n_rows);
      for (const auto& x : series[std::size_t(r)].rows) dst.push_back(x.energy);
    }
  }

  if (cfg.snapshot_stride > 0) {
    res.snapshots.n_cells = grid.n_cells;
    for (auto& s : series)
      for (auto& rec : s.snaps) res.snapshots.records.push_back(std::move(rec));
  }
  return res;
}

/// Least-squares slope of the mean energy over recorded times in
/// [t0, t1], minus the window-averaged injection rate. In the
/// entropy-solution regime this is <= statistical noise, and strictly
/// negative once shocks dissipate.
inline double energy_balance_residual(const EnsembleResult& res, double t0, double t1) {
  if (!(t0 < t1)) throw std::invalid_argument("energy_balance_residual: empty window");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, rate = 0.0;
  long m = 0;
  for (const TimeSeriesRow& row : res.rows) {
    if (row.t < t0 - 1e-12 || row.t > t1 + 1e-12) continue;
    sx += row.t;
    sy += row.mean_energy;
    sxx += row.t * row.t;
    sxy += row.t * row.mean_energy;
    rate += row.ito_injection_rate;
    ++m;
  }
  if (m < 2) throw std::invalid_argument("energy_balance_residual: need two rows in window");
  double denom = double(m) * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("energy_balance_residual: degenerate window");
  double slope = (double(m) * sxy - sx * sy) / denom;
  return slope - rate / double(m);
}

enum class MomentumTestStatus { passed, failed, insufficient_realizations };

struct MomentumCheck {
  double t = 0.0;
  double drift = 0.0;  ///< mean momentum minus its initial value
  double band = 0.0;   ///< acceptance half-width
  bool pass = false;
};

struct MomentumTestReport {
  MomentumTestStatus status = MomentumTestStatus::insufficient_realizations;
  std::vector<MomentumCheck> checks;
};

/// Mean total momentum is a martingale, so every recorded time must sit
/// within 3 standard errors of the initial mean (with a small absolute
/// floor so exact conservation at zero noise is not penalized).
inline MomentumTestReport momentum_conservation_test(const EnsembleResult& res) {
  MomentumTestReport rep;
  if (res.n_realizations < 2 || res.rows.empty()) {
    rep.status = MomentumTestStatus::insufficient_realizations;
    return rep;
  }
  double base = res.rows[0].mean_momentum;
  double floor = 1e-13 * std::max(1.0, std::abs(base));
  bool all = true;
  for (const TimeSeriesRow& row : res.rows) {
    MomentumCheck c;
    c.t = row.t;
    c.drift = row.mean_momentum - base;
    c.band = std::max(3.0 * row.momentum_stderr, floor);
    c.pass = std::abs(c.drift) <= c.band;
    all = all && c.pass;
    rep.checks.push_back(c);
  }
  rep.status = all ? MomentumTestStatus::passed : MomentumTestStatus::failed;
  return rep;
}

struct YoungWindow {
  double x_min = 0.0;
  double x_max = 1.0;
  std::uint32_t step = 0;  ///< snapshot half-step index to sample
};

/// Empirical measure of (w, z) over all (realization, cell) samples in a
/// window. Non-vacuum counts plus vacuum_count sum to total_samples; bin
/// sums of w and z allow evaluating entropies at per-bin mean states.
struct YoungHistogram {
  int bins_w = 0;
  int bins_z = 0;
  double w_lo = 0.0, w_hi = 0.0;
  double z_lo = 0.0, z_hi = 0.0;
  std::vector<long> counts;   ///< bins_w x bins_z, w-major
  std::vector<double> sum_w;
  std::vector<double> sum_z;
  long total_samples = 0;
  long vacuum_count = 0;
  double vacuum_mass = 0.0;
  double vacuum_threshold = 0.0;
};

inline YoungHistogram young_histogram(const GasLaw& law, const Grid& grid,
                                      const SnapshotStore& store, const YoungWindow& win,
                                      int bins_w, int bins_z, double vacuum_threshold) {
  if (bins_w < 1 || bins_z < 1) throw std::invalid_argument("young: need >= 1 bin per axis");
  if (store.n_cells != grid.n_cells)
    throw std::invalid_argument("young: store grid does not match");
  YoungHistogram h;
  h.bins_w = bins_w;
  h.bins_z = bins_z;
  h.vacuum_threshold = vacuum_threshold;
  h.counts.assign(std::size_t(bins_w) * bins_z, 0);
  h.sum_w.assign(std::size_t(bins_w) * bins_z, 0.0);
  h.sum_z.assign(std::size_t(bins_w) * bins_z, 0.0);

  std::vector<double> ws, zs;
  for (const SnapshotRecord& rec : store.records) {
    if (rec.step != win.step) continue;
    for (int i = 0; i < grid.n_cells; ++i) {
      double x = grid.x(i);
      if (x < win.x_min || x > win.x_max) continue;
      ++h.total_samples;
      if (rec.rho[std::size_t(i)] < vacuum_threshold) {
        ++h.vacuum_count;
        continue;
      }
      double z = 0.0, w = 0.0;
      riemann_invariants_cell(law, rec.rho[std::size_t(i)], rec.q[std::size_t(i)], z, w);
      ws.push_back(w);
      zs.push_back(z);
    }
  }
  if (h.total_samples == 0) throw std::invalid_argument("young: window holds no samples");
  if (!ws.empty()) {
    h.w_lo = *std::min_element(ws.begin(), ws.end());
    h.w_hi = *std::max_element(ws.begin(), ws.end());
    h.z_lo = *std::min_element(zs.begin(), zs.end());
    h.z_hi = *std::max_element(zs.begin(), zs.end());
    auto index = [](double v, double lo, double hi, int bins) {
      if (hi <= lo) return 0;
      int b = int((v - lo) / (hi - lo) * bins);
      return std::min(std::max(b, 0), bins - 1);
    };
    for (std::size_t s = 0; s < ws.size(); ++s) {
      int bw = index(ws[s], h.w_lo, h.w_hi, bins_w);
      int bz = index(zs[s], h.z_lo, h.z_hi, bins_z);
      std::size_t b = std::size_t(bw) * bins_z + bz;
      ++h.counts[b];
      h.sum_w[b] += ws[s];
      h.sum_z[b] += zs[s];
    }
  }
  h.vacuum_mass = double(h.vacuum_count) / double(h.total_samples);
  return h;
}

/// Mass of the heaviest non-vacuum bin plus the vacuum mass: 1 means the
/// empirical measure is a single atom or pure vacuum, 1/B means spread
/// uniformly over B bins. Diagnostic only.
inline double dirac_or_vacuum_score(const YoungHistogram& h) {
  if (h.total_samples == 0) throw std::invalid_argument("score: empty histogram");
  long heaviest = 0;
  for (long c : h.counts) heaviest = std::max(heaviest, c);
  return double(heaviest) / double(h.total_samples) + h.vacuum_mass;
}

/// Residual of the point-mass product identity over the empirical
/// measure: <eta2><H1> - <eta1><H2> - <eta2 H1 - eta1 H2>, where each
/// bin is represented by its mean (w, z) state and vacuum atoms carry
/// zero entropy. Exactly zero for a single atom; a diagnostic for how
/// far the measure is from the Dirac-or-vacuum dichotomy otherwise.
inline double functional_equation_residual(const GasLaw& law, const JacobiQuadrature& quad,
                                           const YoungHistogram& h,
                                           const EntropyKernel& pair1,
                                           const EntropyKernel& pair2) {
  if (h.total_samples == 0) throw std::invalid_argument("residual: empty histogram");
  double e1 = 0.0, h1 = 0.0, e2 = 0.0, h2 = 0.0, cross = 0.0;
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    long c = h.counts[b];
    if (c == 0) continue;
    double weight = double(c) / double(h.total_samples);
    double w = h.sum_w[b] / double(c);
    double z = h.sum_z[b] / double(c);
    double rho = density_from_invariants(law, z, w);
    double u = 0.5 * (z + w);
    EntropyValue v1 = eval_pair(law, quad, pair1, rho, u);
    EntropyValue v2 = eval_pair(law, quad, pair2, rho, u);
    e1 += weight * v1.eta;
    h1 += weight * v1.h_flux;
    e2 += weight * v2.eta;
    h2 += weight * v2.h_flux;
    cross += weight * (v2.eta * v1.h_flux - v1.eta * v2.h_flux);
  }
  return e2 * h1 - e1 * h2 - cross;
}

}  // namespace flume

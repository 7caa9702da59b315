/**
 * @file dynamics.hpp
 * @brief Time integration: viscous transport steps, stochastic momentum
 *        steps, and the alternating splitting driver.
 *
 * One splitting period of length 2*tau integrates the sped-up viscous
 * system (flux and diffusivity doubled) on the first half and the
 * amplified momentum SDE (noise scaled by sqrt(2)) on the second half,
 * so period averages recover the unsplit dynamics.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "flume/gas_law.hpp"
#include "flume/grid.hpp"
#include "flume/heat.hpp"
#include "flume/noise.hpp"
#include "flume/rng.hpp"
#include "flume/state.hpp"

namespace flume {

struct SchemeConfig {
  double epsilon = 1e-3;            ///< viscosity of the parabolic regularization
  double tau = 1e-3;                ///< splitting half-period
  double cfl = 0.45;                ///< Courant number against the doubled wave speed
  double rho_floor = 1e-12;         ///< below this, cells snap to exact vacuum (conservatively)
  double vacuum_snap_rel = 1e-6;    ///< vacuum threshold as a fraction of the max density
  std::optional<double> kappa_bound;///< invariant-region radius to monitor, if any
  double wave_speed_ceiling = 1e3;  ///< |u| + c beyond this aborts the run
  int sto_substeps = 4;             ///< Euler-Maruyama substeps per stochastic half-period
};

inline void validate(const SchemeConfig& cfg) {
  if (!(cfg.epsilon >= 0.0)) throw std::domain_error("scheme: epsilon must be >= 0");
  if (!(cfg.tau > 0.0)) throw std::domain_error("scheme: tau must be > 0");
  if (!(cfg.cfl > 0.0) || !(cfg.cfl <= 1.0))
    throw std::domain_error("scheme: cfl must lie in (0, 1]");
  if (!(cfg.rho_floor >= 0.0)) throw std::domain_error("scheme: rho_floor must be >= 0");
  if (!(cfg.vacuum_snap_rel >= 0.0) || !(cfg.vacuum_snap_rel < 1.0))
    throw std::domain_error("scheme: vacuum_snap_rel must lie in [0, 1)");
  if (cfg.kappa_bound && !(*cfg.kappa_bound > 0.0))
    throw std::domain_error("scheme: kappa_bound must be > 0 when set");
  if (!(cfg.wave_speed_ceiling > 0.0))
    throw std::domain_error("scheme: wave_speed_ceiling must be > 0");
  if (cfg.sto_substeps < 1) throw std::domain_error("scheme: sto_substeps must be >= 1");
}

/// Raised when the fastest wave exceeds the configured ceiling or stops
/// being finite; the state is left as computed so far.
class BlowupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when transport drives a density below -rho_floor.
class NegativeDensityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StepReport {
  double mass_before = 0.0;
  double mass_after = 0.0;
  double momentum_before = 0.0;
  double momentum_after = 0.0;
  double min_rho = 0.0;               ///< over the final state
  double max_riemann = 0.0;           ///< max over cells of max(|z|, |w|), final state
  long substeps_taken = 0;
  long invariant_violation_count = 0; ///< cells outside kappa_bound, final state; 0 if unset
  double grad_energy_increment = 0.0; ///< integral of rho |du/dx|^2 dx dt over the step
};

namespace detail {

/// Fills min_rho / max_riemann / invariant_violation_count from the state.
inline void finalize_report(const GasLaw& law, const ConservedField& f,
                            const SchemeConfig& cfg, StepReport& rep) {
  double min_rho = f.rho.empty() ? 0.0 : f.rho[0];
  double max_r = 0.0;
  long violations = 0;
  double z = 0.0, w = 0.0;
  for (int i = 0; i < f.size(); ++i) {
    min_rho = std::min(min_rho, f.rho[i]);
    riemann_invariants_cell(law, f.rho[i], f.q[i], z, w);
    max_r = std::max(max_r, std::max(std::abs(z), std::abs(w)));
    if (cfg.kappa_bound && (z < -*cfg.kappa_bound || w > *cfg.kappa_bound)) ++violations;
  }
  rep.min_rho = min_rho;
  rep.max_riemann = max_r;
  rep.invariant_violation_count = violations;
}

/// Wet/dry floor. Cells below the dry threshold are set to the threshold
/// density at rest, and the mass and momentum so displaced are returned
/// to the bulk, mass-weighted, so both invariants survive the clip
/// exactly and the post-clip field is strictly positive. The threshold
/// is rho_floor or vacuum_snap_rel times the max density, whichever is
/// larger: the diffusion moves rho and q independently, so in a cell
/// whose density contributions nearly cancel the ratio q / rho is
/// unconstrained, and only a floor at the field scale keeps the
/// surviving velocities comparable to the bulk ones. Cells that far
/// below the maximum carry no physical content.
///
/// allow_undershoot distinguishes the callers: the transport update is a
/// convex combination under the CFL bound, so a density at or below
/// -rho_floor there is a genuine scheme failure; the spectral diffusion
/// is a truncated-kernel convolution that can legitimately dip a little
/// below zero beside a near-dry front, and that dip is absorbed here.
/// A deficit comparable to the surviving mass means the state is lost
/// either way.
inline void clip_vacuum(ConservedField& f, const SchemeConfig& cfg, const char* where,
                        bool allow_undershoot = false) {
  double max_rho = 0.0;
  for (int i = 0; i < f.size(); ++i) max_rho = std::max(max_rho, f.rho[i]);
  const double threshold = std::max(cfg.rho_floor, cfg.vacuum_snap_rel * max_rho);
  double excess_rho = 0.0, excess_q = 0.0, bulk = 0.0;
  bool any = false;
  for (int i = 0; i < f.size(); ++i) {
    if (f.rho[i] < threshold) {
      if (!allow_undershoot && f.rho[i] <= -cfg.rho_floor)
        throw NegativeDensityError(std::string("negative density ") +
                                   std::to_string(f.rho[i]) + " in cell " +
                                   std::to_string(i) + " after " + where);
      excess_rho += f.rho[i] - threshold;
      excess_q += f.q[i];
      any = true;
    } else {
      bulk += f.rho[i];
    }
  }
  if (!any) return;
  if (bulk <= 0.0) {
    // Fully dry field: nothing to borrow the floor mass from, so keep
    // the cells at exact vacuum instead.
    for (int i = 0; i < f.size(); ++i) {
      f.rho[i] = 0.0;
      f.q[i] = 0.0;
    }
    return;
  }
  if (-excess_rho > 0.5 * bulk)
    throw NegativeDensityError(std::string("density deficit ") +
                               std::to_string(-excess_rho) + " comparable to the mass " +
                               std::to_string(bulk) + " left after " + where);
  double scale = 1.0 + excess_rho / bulk;  // >= 1/2; keeps the bulk positive
  double shift = excess_q / bulk;
  for (int i = 0; i < f.size(); ++i) {
    if (f.rho[i] < threshold) {
      f.rho[i] = threshold;
      f.q[i] = 0.0;
    } else {
      f.q[i] += shift * f.rho[i];
      f.rho[i] *= scale;
    }
  }
}

}  // namespace detail

/// Advances the doubled-speed viscous system over `dt` by adaptive Lie
/// substeps: Rusanov transport of the doubled flux, then exact spectral
/// diffusion with diffusivity 2*epsilon. Mass is conserved exactly by
/// both pieces; momentum up to roundoff.
inline StepReport det_step(const GasLaw& law, const Grid& grid, ConservedField& f,
                           double dt, const SchemeConfig& cfg, HeatWorkspace& ws) {
  validate(cfg);
  if (!(dt >= 0.0)) throw std::domain_error("det_step: dt must be >= 0");
  const int n = f.size();
  if (n != grid.n_cells) throw std::invalid_argument("det_step: field/grid size mismatch");

  StepReport rep;
  rep.mass_before = total_mass(grid, f);
  rep.momentum_before = total_momentum(grid, f);

  std::vector<double> speed(n);        // |u| + c per cell, unscaled
  std::vector<double> flux_rho(n), flux_q(n);
  std::vector<double> hat_rho(n), hat_q(n);  // interface i -> i+1 (periodic)

  double remaining = dt;
  while (remaining > 0.0) {
    double a_max = 0.0;
    for (int i = 0; i < n; ++i) {
      double u = velocity(f.rho[i], f.q[i]);
      speed[i] = std::abs(u) + sound_speed(law, f.rho[i]);
      a_max = std::max(a_max, speed[i]);
      auto fl = flux_cell(law, f.rho[i], f.q[i]);
      flux_rho[i] = fl[0];
      flux_q[i] = fl[1];
    }
    if (!std::isfinite(a_max) || a_max > cfg.wave_speed_ceiling)
      throw BlowupError("wave speed " + std::to_string(a_max) + " exceeds ceiling " +
                        std::to_string(cfg.wave_speed_ceiling));

    double dt_s = remaining;
    if (a_max > 0.0) dt_s = std::min(remaining, cfg.cfl * grid.dx / (2.0 * a_max));

    // Rusanov flux for the doubled system: (F_i + F_j) - a_ij (U_j - U_i)
    // with a_ij the larger adjacent unscaled speed. The update is a convex
    // combination of neighbor densities whenever 2 a_ij dt <= dx.
    for (int i = 0; i < n; ++i) {
      int j = (i + 1 == n) ? 0 : i + 1;
      double a = std::max(speed[i], speed[j]);
      hat_rho[i] = (flux_rho[i] + flux_rho[j]) - a * (f.rho[j] - f.rho[i]);
      hat_q[i] = (flux_q[i] + flux_q[j]) - a * (f.q[j] - f.q[i]);
    }
    double lam = dt_s / grid.dx;
    for (int i = 0; i < n; ++i) {
      int im = (i == 0) ? n - 1 : i - 1;
      f.rho[i] -= lam * (hat_rho[i] - hat_rho[im]);
      f.q[i] -= lam * (hat_q[i] - hat_q[im]);
    }
    detail::clip_vacuum(f, cfg, "transport");

    if (cfg.epsilon > 0.0) {
      heat_apply_inplace(f.rho, 2.0 * cfg.epsilon, dt_s, ws);
      heat_apply_inplace(f.q, 2.0 * cfg.epsilon, dt_s, ws);
      detail::clip_vacuum(f, cfg, "diffusion", /*allow_undershoot=*/true);
    }

    double grad = 0.0;
    for (int i = 0; i < n; ++i) {
      int im = (i == 0) ? n - 1 : i - 1;
      int ip = (i + 1 == n) ? 0 : i + 1;
      double du = (velocity(f.rho[ip], f.q[ip]) - velocity(f.rho[im], f.q[im])) /
                  (2.0 * grid.dx);
      grad += f.rho[i] * du * du;
    }
    rep.grad_energy_increment += dt_s * grad * grid.dx;

    ++rep.substeps_taken;
    remaining -= dt_s;
  }

  rep.mass_after = total_mass(grid, f);
  rep.momentum_after = total_momentum(grid, f);
  detail::finalize_report(law, f, cfg, rep);
  return rep;
}

/// Advances the amplified momentum SDE over the increments' total span:
/// per substep, q += sqrt(2) * sum_k sigma_k(x, rho, u) dW_k with the
/// coefficients re-evaluated at the current velocity. Density is never
/// touched.
inline StepReport sto_step(const GasLaw& law, const Grid& grid, ConservedField& f,
                           const NoiseModel& noise, const BakedNoise& baked,
                           const std::vector<WienerIncrement>& increments,
                           const SchemeConfig& cfg) {
  validate(cfg);
  const int n = f.size();
  if (n != grid.n_cells) throw std::invalid_argument("sto_step: field/grid size mismatch");
  if (baked.n_cells != n || baked.n_modes != noise.n_modes())
    throw std::invalid_argument("sto_step: baked tables do not match model/grid");

  StepReport rep;
  rep.mass_before = total_mass(grid, f);
  rep.momentum_before = total_momentum(grid, f);

  const int n_modes = noise.n_modes();
  const double root2 = std::sqrt(2.0);
  for (const WienerIncrement& inc : increments) {
    if (int(inc.dW.size()) != n_modes)
      throw std::invalid_argument("sto_step: increment has wrong mode count");
    for (int i = 0; i < n; ++i) {
      double rho = f.rho[i];
      double factor = noise.state_factor(rho);
      if (factor == 0.0) continue;
      if (noise.localization()) {
        double z = 0.0, w = 0.0;
        riemann_invariants_cell(law, rho, f.q[i], z, w);
        factor *= localization_weight(*noise.localization(), z, w);
        if (factor == 0.0) continue;
      }
      double acc = 0.0;
      for (int k = 0; k < n_modes; ++k)
        acc += baked.profiles[std::size_t(k) * n + i] * inc.dW[k];
      f.q[i] += root2 * factor * acc;
    }
    ++rep.substeps_taken;
  }

  rep.mass_after = rep.mass_before;  // rho untouched
  rep.momentum_after = total_momentum(grid, f);
  detail::finalize_report(law, f, cfg, rep);
  return rep;
}

enum class SplitPhase { deterministic, stochastic };

/// Alternates det_step(tau) then sto_step(tau) for n_periods periods,
/// invoking `observer(half_step_index, time, phase, state, report)` after
/// every half-period, so time = half_step_index * tau. Wiener increments
/// are keyed by (master_seed, realization_id, global substep index), so a
/// trajectory is a pure function of those keys. Scheme errors are
/// re-thrown annotated with the realization and half-step.
template <typename Observer>
void split_advance(const GasLaw& law, const Grid& grid, ConservedField& f,
                   const NoiseModel& noise, const BakedNoise& baked,
                   const SchemeConfig& cfg, std::uint64_t master_seed,
                   std::uint32_t realization_id, long n_periods, Observer&& observer) {
  validate(cfg);
  if (n_periods < 0) throw std::invalid_argument("split_advance: negative period count");
  HeatWorkspace ws;
  const double sub_dt = cfg.tau / cfg.sto_substeps;
  std::vector<WienerIncrement> increments(std::size_t(cfg.sto_substeps));

  auto annotate = [&](const char* what, long half_step) {
    return std::string(what) + " (realization " + std::to_string(realization_id) +
           ", half-step " + std::to_string(half_step) + ")";
  };

  for (long p = 0; p < n_periods; ++p) {
    long det_index = 2 * p + 1;
    try {
      StepReport rep = det_step(law, grid, f, cfg.tau, cfg, ws);
      observer(det_index, double(det_index) * cfg.tau, SplitPhase::deterministic, f, rep);
    } catch (const BlowupError& e) {
      throw BlowupError(annotate(e.what(), det_index));
    } catch (const NegativeDensityError& e) {
      throw NegativeDensityError(annotate(e.what(), det_index));
    }

    long sto_index = 2 * p + 2;
    for (int s = 0; s < cfg.sto_substeps; ++s) {
      std::uint64_t global = std::uint64_t(p) * cfg.sto_substeps + s;
      increments[std::size_t(s)] =
          sample_increments(master_seed, realization_id, global, noise.n_modes(), sub_dt);
    }
    StepReport rep = sto_step(law, grid, f, noise, baked, increments, cfg);
    observer(sto_index, double(sto_index) * cfg.tau, SplitPhase::stochastic, f, rep);
  }
}

}  // namespace flume

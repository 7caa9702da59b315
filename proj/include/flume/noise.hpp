#pragma once
/**
 * @file noise.hpp
 * @brief Multiplicative forcing models for the momentum equation.
 *
 * A model is a finite family of coefficients sigma_k(x, rho, u).  All
 * vacuum-preserving kinds scale linearly with rho, so sigma_k(x, 0, u) = 0 and
 * the squared strength G^2 = sum_k sigma_k^2 obeys
 * G^2 <= A0^2 rho^2 (1 + u^2 + rho^(2 theta)) with A0 fixed at construction.
 *
 * The topographic kind carries the forcing of a randomly perturbed bottom:
 * wavenumber k contributes the pair
 *   +g h 2 pi k sigma_k sin(2 pi k x)   and   -g h 2 pi k sigma_k cos(2 pi k x),
 * one per independent Brownian driver.
 *
 * An `additive` kind (state-independent coefficients) exists purely so
 * integrator tests can compare against exact solutions; it is not part of the
 * vacuum-preserving family and skips the growth-bound guarantee.
 */

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "flume/gas_law.hpp"
#include "flume/grid.hpp"

namespace flume {

enum class NoiseKind { zero, shallow_water_topography, generic_multiplicative, additive };

/// Smooth cutoff in the Riemann-invariant coordinates: full strength on the
/// region with max(|z|, |w|) <= (1 - margin) kappa, zero outside Lambda_kappa,
/// quintic-smooth in between.
struct Localization {
  double kappa = 4.0;
  double margin = 0.25;
};

inline double localization_weight(const Localization& loc, double z, double w) {
  double r = std::max(std::abs(z), std::abs(w)) / loc.kappa;
  if (r >= 1.0) return 0.0;
  if (r <= 1.0 - loc.margin) return 1.0;
  double t = (1.0 - r) / loc.margin;  // in (0, 1)
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

class NoiseModel {
public:
  NoiseKind kind = NoiseKind::zero;

  static NoiseModel zero() { return NoiseModel{}; }

  /// Topographic forcing; sigma[j] weights wavenumber j+1, two modes each.
  static NoiseModel shallow_water_topography(double gravity, std::vector<double> sigma) {
    if (!(gravity > 0.0)) throw std::domain_error("noise: gravity must be positive");
    NoiseModel m;
    m.kind = NoiseKind::shallow_water_topography;
    m.gravity_ = gravity;
    m.sigma_ = std::move(sigma);
    const double two_pi = 2.0 * std::acos(-1.0);
    double sum = 0.0;
    for (std::size_t j = 0; j < m.sigma_.size(); ++j) {
      double amp = gravity * two_pi * double(j + 1) * m.sigma_[j];
      sum += amp * amp;
    }
    m.a0_ = std::sqrt(sum);
    return m;
  }

  /// rho-proportional forcing on trigonometric profiles, unit wavenumbers
  /// 1..ceil(n_modes/2), alternating sin/cos.
  static NoiseModel generic_multiplicative(double amplitude, int n_modes) {
    if (n_modes < 0) throw std::invalid_argument("noise: negative mode count");
    NoiseModel m;
    m.kind = NoiseKind::generic_multiplicative;
    m.amplitude_ = amplitude;
    m.n_generic_modes_ = n_modes;
    m.a0_ = std::abs(amplitude) * std::sqrt(double((n_modes + 1) / 2));
    return m;
  }

  /// State-independent coefficients (test-only; see file comment).
  static NoiseModel additive(double amplitude, int n_modes) {
    NoiseModel m = generic_multiplicative(amplitude, n_modes);
    m.kind = NoiseKind::additive;
    return m;
  }

  /// Copy with an invariant-region cutoff applied to every coefficient.
  NoiseModel localized(double kappa, double margin) const {
    if (!(kappa > 0.0) || !(margin > 0.0) || !(margin < 1.0))
      throw std::domain_error("noise: localization needs kappa > 0 and margin in (0,1)");
    NoiseModel m = *this;
    m.localization_ = Localization{kappa, margin};
    return m;
  }

  int n_modes() const {
    switch (kind) {
      case NoiseKind::zero: return 0;
      case NoiseKind::shallow_water_topography: return 2 * int(sigma_.size());
      default: return n_generic_modes_;
    }
  }

  const std::optional<Localization>& localization() const { return localization_; }
  double growth_constant() const { return a0_; }
  double gravity() const { return gravity_; }
  const std::vector<double>& sigma() const { return sigma_; }
  double amplitude() const { return amplitude_; }

  /// x-dependent profile of mode k; the full coefficient is
  /// profile * state_factor(rho) * cutoff(z, w).
  double profile(int k, double x) const {
    const double two_pi = 2.0 * std::acos(-1.0);
    switch (kind) {
      case NoiseKind::zero: return 0.0;
      case NoiseKind::shallow_water_topography: {
        int wav = k / 2 + 1;
        double amp = gravity_ * two_pi * double(wav) * sigma_[wav - 1];
        return (k % 2 == 0) ? amp * std::sin(two_pi * wav * x)
                            : -amp * std::cos(two_pi * wav * x);
      }
      default: {
        int wav = k / 2 + 1;
        return (k % 2 == 0) ? amplitude_ * std::sin(two_pi * wav * x)
                            : amplitude_ * std::cos(two_pi * wav * x);
      }
    }
  }

  double state_factor(double rho) const {
    return kind == NoiseKind::additive ? 1.0 : rho;
  }

  /// Full coefficient sigma_k(x, rho, u).
  double coefficient(const GasLaw& law, int k, double x, double rho, double u) const {
    if (k < 0 || k >= n_modes()) throw std::out_of_range("noise: mode index");
    double value = profile(k, x) * state_factor(rho);
    if (localization_) {
      double s = std::pow(rho, law.theta);
      value *= localization_weight(*localization_, u - s, u + s);
    }
    return value;
  }

  /// G^2(x, U) = sum_k sigma_k^2.
  double g_squared(const GasLaw& law, double x, double rho, double u) const {
    double cut = 1.0;
    if (localization_) {
      double s = std::pow(rho, law.theta);
      cut = localization_weight(*localization_, u - s, u + s);
    }
    double factor = state_factor(rho) * cut;
    double sum = 0.0;
    for (int k = 0; k < n_modes(); ++k) {
      double p = profile(k, x);
      sum += p * p;
    }
    return sum * factor * factor;
  }

private:
  double gravity_ = 0.0;
  std::vector<double> sigma_;
  double amplitude_ = 0.0;
  int n_generic_modes_ = 0;
  std::optional<Localization> localization_;
  double a0_ = 0.0;
};

/// Mode profiles sampled on a grid so the stochastic substep is a plain
/// fused multiply loop.  Layout: profiles[k * n + i].
struct BakedNoise {
  int n_modes = 0;
  int n_cells = 0;
  std::vector<double> profiles;
  std::vector<double> profile_sq_sum;  // sum_k profile_k(x_i)^2 per cell

  static BakedNoise bake(const NoiseModel& model, const Grid& grid) {
    BakedNoise b;
    b.n_modes = model.n_modes();
    b.n_cells = grid.n_cells;
    b.profiles.assign(std::size_t(b.n_modes) * grid.n_cells, 0.0);
    b.profile_sq_sum.assign(grid.n_cells, 0.0);
    for (int k = 0; k < b.n_modes; ++k)
      for (int i = 0; i < grid.n_cells; ++i) {
        double p = model.profile(k, grid.x(i));
        b.profiles[std::size_t(k) * grid.n_cells + i] = p;
        b.profile_sq_sum[i] += p * p;
      }
    return b;
  }
};

}  // namespace flume

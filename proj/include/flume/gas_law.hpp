#pragma once
/// @file gas_law.hpp
/// @brief Gamma-law gas constants, pressure/sound-speed evaluation, and the
///        shallow-water pressure bridge.

#include <cmath>
#include <stdexcept>

namespace flume {

/// Selects the pressure normalization.  `normalized` uses the coefficient
/// that makes u +/- rho^theta the characteristic invariants; `shallow_water`
/// uses p = (g/2) h^2 so that fields can be read as (h, h u).
enum class PressureMode { normalized, shallow_water };

/// Immutable bundle of constants derived from the adiabatic exponent.
/// Invariants: gamma > 1, theta = (gamma-1)/2, lambda = (3-gamma)/(2(gamma-1))
/// stays above -1/2, and c_lambda normalizes (1-z^2)^lambda to unit mass on
/// [-1, 1].
struct GasLaw {
  double gamma = 2.0;
  double theta = 0.5;
  double kappa = 0.125;          // theta^2 / gamma
  double lambda = 0.5;           // (3 - gamma) / (2 (gamma - 1))
  double c_lambda = 0.0;         // 1 / integral of (1 - z^2)^lambda
  double pressure_coeff = 0.125; // multiplies rho^gamma in the pressure law
  PressureMode mode = PressureMode::normalized;

  static GasLaw normalized(double gamma) { return make(gamma, PressureMode::normalized, 0.0); }

  /// gamma = 2 with p = (g/2) h^2.
  static GasLaw shallow_water(double gravity) {
    if (!(gravity > 0.0)) throw std::domain_error("gas_law: gravity must be positive");
    return make(2.0, PressureMode::shallow_water, gravity);
  }

private:
  static GasLaw make(double gamma, PressureMode mode, double gravity) {
    if (!(gamma > 1.0)) throw std::domain_error("gas_law: gamma must exceed 1");
    GasLaw law;
    law.gamma = gamma;
    law.theta = 0.5 * (gamma - 1.0);
    law.kappa = law.theta * law.theta / gamma;
    law.lambda = (3.0 - gamma) / (2.0 * (gamma - 1.0));
    if (!(law.lambda > -0.5)) throw std::domain_error("gas_law: lambda must exceed -1/2");
    // c_lambda = Gamma(lambda + 3/2) / (sqrt(pi) Gamma(lambda + 1)).
    law.c_lambda = std::exp(std::lgamma(law.lambda + 1.5) - std::lgamma(law.lambda + 1.0)) /
                   std::sqrt(std::acos(-1.0));
    law.mode = mode;
    law.pressure_coeff = (mode == PressureMode::normalized) ? law.kappa : 0.5 * gravity;
    return law;
  }
};

inline double pressure(const GasLaw& law, double rho) {
  if (rho < 0.0) throw std::domain_error("pressure: negative density");
  return law.pressure_coeff * std::pow(rho, law.gamma);
}

/// Sound speed of the chosen mode; theta * rho^theta normalized, sqrt(g h)
/// for shallow water.  Returns 0 at vacuum.
inline double sound_speed(const GasLaw& law, double rho) {
  if (rho < 0.0) throw std::domain_error("sound_speed: negative density");
  if (law.mode == PressureMode::shallow_water)
    return std::sqrt(2.0 * law.pressure_coeff * rho);
  return law.theta * std::pow(rho, law.theta);
}

/// Density scaling that maps states of a p = a rho^gamma system onto the
/// normalized-coefficient system with the same gamma: rho_tilde = beta rho,
/// q_tilde = beta q, velocity unchanged.
inline double shallow_water_scale(const GasLaw& law) {
  return std::pow(law.pressure_coeff / law.kappa, 1.0 / (law.gamma - 1.0));
}

}  // namespace flume

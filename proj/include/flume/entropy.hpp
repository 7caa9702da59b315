#pragma once
/**
 * @file entropy.hpp
 * @brief Weak entropy / entropy-flux pairs of the isentropic system through
 *        their kinetic representation.
 *
 * A convex C^2 generator g with subquadratic growth induces
 *
 *   eta(U)  = rho c_lambda int_{-1}^{1} g(u + z rho^theta) (1 - z^2)^lambda dz,
 *   H(U)    = rho c_lambda int_{-1}^{1} g(u + z rho^theta)
 *                                (u + z theta rho^theta) (1 - z^2)^lambda dz.
 *
 * The flux weight is sometimes written theta*xi + (1-theta)*u; under
 * xi = u + z rho^theta that equals u + theta (xi - u) = u + z theta rho^theta,
 * which is the form integrated here.
 *
 * Everything below evaluates pointwise states; both members of a pair vanish
 * at vacuum.
 */

#include <cmath>
#include <functional>
#include <stdexcept>

#include "flume/gas_law.hpp"
#include "flume/quadrature.hpp"

namespace flume {

/// Generator with first and second derivatives.  subquadratic_constant is a C
/// with |g| <= C (1 + xi^2) and |g'| <= C (1 + |xi|), recorded so growth
/// assumptions stay checkable.
struct EntropyKernel {
  std::function<double(double)> g;
  std::function<double(double)> g1;
  std::function<double(double)> g2;
  double subquadratic_constant = 1.0;
};

inline EntropyKernel mass_kernel() {
  return {[](double) { return 1.0; }, [](double) { return 0.0; }, [](double) { return 0.0; },
          1.0};
}

inline EntropyKernel momentum_kernel() {
  return {[](double x) { return x; }, [](double) { return 1.0; }, [](double) { return 0.0; },
          1.0};
}

inline EntropyKernel energy_kernel() {
  return {[](double x) { return 0.5 * x * x; }, [](double x) { return x; },
          [](double) { return 1.0; }, 1.0};
}

/// g(xi) = xi^(2m).  Subquadratic only for m <= 1; larger m is still a valid
/// diagnostic generator.
inline EntropyKernel moment_kernel(int m) {
  if (m < 0) throw std::domain_error("moment_kernel: m must be nonnegative");
  int p = 2 * m;
  return {[p](double x) { return std::pow(x, p); },
          [p](double x) { return p == 0 ? 0.0 : p * std::pow(x, p - 1); },
          [p](double x) { return p <= 1 ? 0.0 : double(p) * (p - 1) * std::pow(x, p - 2); },
          1.0};
}

struct EntropyValue {
  double eta = 0.0;
  double h_flux = 0.0;
};

/// Quadrature evaluation of the pair for one state.  Exact (to quadrature
/// exactness) for polynomial generators of degree <= 2 n_nodes - 2.
inline EntropyValue eval_pair(const GasLaw& law, const JacobiQuadrature& quad,
                              const EntropyKernel& kernel, double rho, double u) {
  if (rho < 0.0) throw std::domain_error("eval_pair: negative density");
  if (rho == 0.0) return {};
  double s = std::pow(rho, law.theta);
  double eta = 0.0, flux = 0.0;
  for (int i = 0; i < quad.n_nodes; ++i) {
    double gi = kernel.g(u + quad.nodes[i] * s);
    eta += quad.weights[i] * gi;
    flux += quad.weights[i] * gi * (u + quad.nodes[i] * law.theta * s);
  }
  double scale = rho * law.c_lambda;
  return {scale * eta, scale * flux};
}

/// Total energy eta_E = q^2 / (2 rho) + a/(gamma-1) rho^gamma in closed form;
/// with a = g/2 and gamma = 2 this is the shallow-water h u^2/2 + g h^2/2.
inline double energy(const GasLaw& law, double rho, double u) {
  if (rho < 0.0) throw std::domain_error("energy: negative density");
  return 0.5 * rho * u * u +
         law.pressure_coeff / (law.gamma - 1.0) * std::pow(rho, law.gamma);
}

inline double energy_flux(const GasLaw& law, double rho, double u) {
  return u * (energy(law, rho, u) + pressure(law, rho));
}

/// Even moment of the kinetic weight: d_m = c_lambda int z^(2m) (1-z^2)^lambda dz.
/// d_0 = 1 and the sequence decreases toward 0.
inline double d_lambda(const GasLaw& law, int m) {
  if (m < 0) throw std::domain_error("d_lambda: m must be nonnegative");
  // Gamma(m + 1/2) Gamma(lambda + 3/2) / (Gamma(1/2) Gamma(m + lambda + 3/2)).
  return std::exp(std::lgamma(m + 0.5) + std::lgamma(law.lambda + 1.5) -
                  std::lgamma(0.5) - std::lgamma(m + law.lambda + 1.5));
}

/// Closed-form moment entropy (generator xi^(2m)):
/// eta_m = rho sum_j C(2m, 2j) d_j rho^(2 theta j) u^(2(m-j)).
inline double eta_moment(const GasLaw& law, int m, double rho, double u) {
  if (m < 0) throw std::domain_error("eta_moment: m must be nonnegative");
  if (rho < 0.0) throw std::domain_error("eta_moment: negative density");
  if (rho == 0.0) return 0.0;
  double s2 = std::pow(rho, 2.0 * law.theta);
  double sum = 0.0;
  double binom = 1.0;  // C(2m, 2j) built multiplicatively
  for (int j = 0; j <= m; ++j) {
    if (j > 0) {
      binom *= double(2 * m - 2 * j + 2) * (2 * m - 2 * j + 1) / (double(2 * j) * (2 * j - 1));
    }
    sum += binom * d_lambda(law, j) * std::pow(s2, j) *
           ((m - j) > 0 ? std::pow(u, 2 * (m - j)) : 1.0);
  }
  return rho * sum;
}

/// Kinetic density chi(U, v) = (v - z)_+^lambda (w - v)_+^lambda; identically
/// zero outside [z, w].
inline double chi(const GasLaw& law, double rho, double u, double v) {
  if (rho < 0.0) throw std::domain_error("chi: negative density");
  if (rho == 0.0) return 0.0;
  double s = std::pow(rho, law.theta);
  double z = u - s, w = u + s;
  if (v < z || v > w) return 0.0;
  return std::pow(v - z, law.lambda) * std::pow(w - v, law.lambda);
}

struct EntropyDerivatives {
  double deta_dq = 0.0;   // c_lambda int g'(xi) dm_lambda
  double d2eta_dqq = 0.0; // (c_lambda / rho) int g''(xi) dm_lambda
};

/// Momentum derivatives of eta.  The state must be bounded away from vacuum;
/// below rho_floor the second derivative is singular and evaluation refuses.
inline EntropyDerivatives eta_derivatives(const GasLaw& law, const JacobiQuadrature& quad,
                                          const EntropyKernel& kernel, double rho, double u,
                                          double rho_floor = 1e-12) {
  if (!(rho >= rho_floor))
    throw std::domain_error("eta_derivatives: state too close to vacuum");
  double s = std::pow(rho, law.theta);
  double first = 0.0, second = 0.0;
  for (int i = 0; i < quad.n_nodes; ++i) {
    double xi = u + quad.nodes[i] * s;
    first += quad.weights[i] * kernel.g1(xi);
    second += quad.weights[i] * kernel.g2(xi);
  }
  return {law.c_lambda * first, law.c_lambda * second / rho};
}

}  // namespace flume

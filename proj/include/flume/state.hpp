#pragma once
/**
 * @file state.hpp
 * @brief Conserved fields (rho, q), Riemann-invariant coordinates, and the
 *        physical flux.
 *
 * Vacuum convention used throughout: where rho == 0 the momentum is zero and
 * the velocity is defined as zero.
 */

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "flume/gas_law.hpp"
#include "flume/grid.hpp"

namespace flume {

/// Density and momentum per cell.  Invariant: rho >= 0 everywhere and q == 0
/// wherever rho == 0.
struct ConservedField {
  std::vector<double> rho;
  std::vector<double> q;

  int size() const { return static_cast<int>(rho.size()); }
};

inline ConservedField make_field(std::vector<double> rho, std::vector<double> q) {
  if (rho.size() != q.size()) throw std::invalid_argument("field: size mismatch");
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (rho[i] < 0.0) throw std::domain_error("field: negative density");
    if (rho[i] == 0.0) q[i] = 0.0;
  }
  return ConservedField{std::move(rho), std::move(q)};
}

inline double velocity(double rho, double q) { return rho > 0.0 ? q / rho : 0.0; }

/// z = u - rho^theta, w = u + rho^theta per cell, so z <= w always holds.
/// In shallow-water mode these are the bridge-scaled characteristic
/// coordinates; the exact characteristics u +/- 2 sqrt(g h) are recovered by
/// applying shallow_water_scale first.
struct RiemannPair {
  std::vector<double> z;
  std::vector<double> w;
};

inline void riemann_invariants_cell(const GasLaw& law, double rho, double q, double& z,
                                    double& w) {
  if (rho < 0.0) throw std::domain_error("riemann_invariants: negative density");
  double u = velocity(rho, q);
  double s = std::pow(rho, law.theta);
  z = u - s;
  w = u + s;
}

inline RiemannPair riemann_invariants(const GasLaw& law, const ConservedField& f) {
  RiemannPair p;
  p.z.resize(f.rho.size());
  p.w.resize(f.rho.size());
  for (std::size_t i = 0; i < f.rho.size(); ++i)
    riemann_invariants_cell(law, f.rho[i], f.q[i], p.z[i], p.w[i]);
  return p;
}

/// Reconstructs density from an invariant pair: rho = ((w - z)/2)^(1/theta).
inline double density_from_invariants(const GasLaw& law, double z, double w) {
  if (w < z) throw std::domain_error("density_from_invariants: requires z <= w");
  return std::pow(0.5 * (w - z), 1.0 / law.theta);
}

struct RegionCheck {
  bool all_inside = true;
  long violations = 0;  // cells with max(|z|, |w|) > kappa
};

/// Membership in the symmetric invariant region -kappa <= z <= w <= kappa.
inline RegionCheck in_invariant_region(const RiemannPair& p, double kappa) {
  RegionCheck c;
  for (std::size_t i = 0; i < p.z.size(); ++i) {
    if (p.z[i] < -kappa || p.w[i] > kappa) {
      c.all_inside = false;
      ++c.violations;
    }
  }
  return c;
}

/// Physical flux (q, q^2 / rho + p(rho)); (0, 0) at vacuum.
inline std::array<double, 2> flux_cell(const GasLaw& law, double rho, double q) {
  if (rho < 0.0) throw std::domain_error("flux: negative density");
  if (rho == 0.0) return {0.0, 0.0};
  return {q, q * q / rho + pressure(law, rho)};
}

inline double total_mass(const Grid& g, const ConservedField& f) {
  double s = 0.0;
  for (double r : f.rho) s += r;
  return s * g.dx;
}

inline double total_momentum(const Grid& g, const ConservedField& f) {
  double s = 0.0;
  for (double v : f.q) s += v;
  return s * g.dx;
}

}  // namespace flume

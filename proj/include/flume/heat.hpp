#pragma once
/**
 * @file heat.hpp
 * @brief Periodic heat semigroup on the unit torus: exact spectral stepping
 *        and closed-form kernel evaluation.
 *
 * Diffusion is always applied in Fourier space (mode k decays by
 * exp(-4 pi^2 k^2 nu dt)); there is no finite-difference Laplacian anywhere.
 * The zero mode is untouched and the cell mean is restored exactly after the
 * round trip, so repeated applications conserve mass to the last bit the
 * final addition allows.
 */

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "flume/fft.hpp"

namespace flume {

/// DFT coefficients of a real field with the Hermitian redundancy kept
/// explicit (coeff[k] must equal conj(coeff[n-k])).
struct SpectralField {
  std::vector<std::complex<double>> coeff;

  static SpectralField from_real(const std::vector<double>& f) {
    SpectralField s;
    s.coeff.assign(f.begin(), f.end());
    fft_inplace(s.coeff);
    return s;
  }

  std::vector<double> to_real() const {
    auto a = coeff;
    ifft_inplace(a);
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i].real();
    return out;
  }

  /// Largest violation of coeff[k] == conj(coeff[n-k]).
  double hermitian_defect() const {
    std::size_t n = coeff.size();
    double worst = 0.0;
    for (std::size_t k = 1; k < n; ++k)
      worst = std::max(worst, std::abs(coeff[k] - std::conj(coeff[n - k])));
    return worst;
  }
};

namespace detail {

/// Signed integer frequency of DFT bin k for length n.
inline int bin_frequency(std::size_t k, std::size_t n) {
  return (k <= n / 2) ? int(k) : int(k) - int(n);
}

}  // namespace detail

/// Workspace so the hot path reuses its complex buffer.
struct HeatWorkspace {
  std::vector<std::complex<double>> buf;
};

/// In-place heat step: f <- S(nu dt) f.
inline void heat_apply_inplace(std::vector<double>& f, double nu, double dt,
                               HeatWorkspace& ws) {
  if (nu < 0.0 || dt < 0.0) throw std::domain_error("heat_apply: negative nu or dt");
  const std::size_t n = f.size();
  if (n == 0) throw std::invalid_argument("heat_apply: empty field");
  double prod = nu * dt;
  if (prod == 0.0) return;

  double mean = 0.0;
  for (double v : f) mean += v;
  mean /= double(n);

  ws.buf.assign(n, {});
  for (std::size_t i = 0; i < n; ++i) ws.buf[i] = f[i] - mean;
  fft_inplace(ws.buf);
  const double pi = std::acos(-1.0);
  ws.buf[0] = 0.0;  // fluctuation has no zero mode
  for (std::size_t k = 1; k < n; ++k) {
    double freq = detail::bin_frequency(k, n);
    ws.buf[k] *= std::exp(-4.0 * pi * pi * freq * freq * prod);
  }
  ifft_inplace(ws.buf);
  for (std::size_t i = 0; i < n; ++i) f[i] = mean + ws.buf[i].real();

  // Pin the mean back exactly (one final rounding at most).
  double mean_out = 0.0;
  for (double v : f) mean_out += v;
  mean_out /= double(n);
  double shift = mean - mean_out;
  for (double& v : f) v += shift;
}

inline std::vector<double> heat_apply(std::vector<double> f, double nu, double dt) {
  HeatWorkspace ws;
  heat_apply_inplace(f, nu, dt, ws);
  return f;
}

/// Periodized Gaussian K_t(x) = sum_n (4 pi t)^(-1/2) exp(-(x+n)^2 / (4 t)).
/// Truncation at |n| <= ceil(1 + 12 sqrt(t)) keeps the dropped tail below
/// 1e-16: the remainder is bounded by erfc((reach - 1) / (2 sqrt(t))) and
/// erfc(6) ~ 2e-17.
inline double kernel_eval(double t, double x) {
  if (!(t > 0.0)) throw std::domain_error("kernel_eval: time must be positive");
  x -= std::floor(x);  // kernel is 1-periodic
  int reach = int(std::ceil(1.0 + 12.0 * std::sqrt(t)));
  const double pi = std::acos(-1.0);
  double norm = 1.0 / std::sqrt(4.0 * pi * t);
  double sum = 0.0;
  for (int n = -reach; n <= reach; ++n) {
    double y = x + n;
    sum += std::exp(-y * y / (4.0 * t));
  }
  return norm * sum;
}

/// Spectral derivative, Nyquist bin set to zero.
inline std::vector<double> spectral_derivative(const std::vector<double>& f) {
  const std::size_t n = f.size();
  std::vector<std::complex<double>> a(f.begin(), f.end());
  fft_inplace(a);
  const double pi = std::acos(-1.0);
  for (std::size_t k = 0; k < n; ++k) {
    int freq = detail::bin_frequency(k, n);
    if (2 * std::size_t(std::abs(freq)) == n) {
      a[k] = 0.0;
    } else {
      a[k] *= std::complex<double>(0.0, 2.0 * pi * freq);
    }
  }
  ifft_inplace(a);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i].real();
  return out;
}

}  // namespace flume

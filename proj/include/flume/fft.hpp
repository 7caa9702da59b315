#pragma once
/**
 * @file fft.hpp
 * @brief Self-contained complex FFT: iterative radix-2 with a Bluestein
 *        fallback for arbitrary lengths.
 *
 * Plans (twiddle tables, bit-reversal, chirp transforms) are cached per
 * length behind a mutex with a thread-local fast path, so transforms are
 * reentrant and bit-for-bit deterministic regardless of call order.
 */

#include <complex>
#include <cmath>
#include <cstdint>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace flume {
namespace detail {

using cd = std::complex<double>;

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

struct FftPlan {
  std::size_t n = 0;
  bool pow2 = true;
  // radix-2 data (for n itself, or for the Bluestein padded length m)
  std::size_t m = 0;
  std::vector<std::uint32_t> bitrev;
  std::vector<cd> twiddle;  // exp(-2 pi i k / m), k < m/2
  // Bluestein data
  std::vector<cd> chirp;      // exp(+i pi j^2 / n), j < n
  std::vector<cd> chirp_fft;  // forward transform of the padded symmetric chirp
};

inline void radix2_inplace(std::vector<cd>& a, const FftPlan& p, bool inverse) {
  const std::size_t m = a.size();
  for (std::size_t i = 0; i < m; ++i) {
    std::uint32_t j = p.bitrev[i];
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= m; len <<= 1) {
    std::size_t half = len >> 1;
    std::size_t step = m / len;
    for (std::size_t start = 0; start < m; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        cd w = p.twiddle[k * step];
        if (inverse) w = std::conj(w);
        cd even = a[start + k];
        cd odd = a[start + k + half] * w;
        a[start + k] = even + odd;
        a[start + k + half] = even - odd;
      }
    }
  }
}

inline std::shared_ptr<const FftPlan> build_plan(std::size_t n) {
  auto plan = std::make_shared<FftPlan>();
  plan->n = n;
  plan->pow2 = is_pow2(n);
  const double pi = std::acos(-1.0);

  std::size_t m = n;
  if (!plan->pow2) {
    m = 1;
    while (m < 2 * n - 1) m <<= 1;
  }
  plan->m = m;

  plan->bitrev.assign(m, 0);
  std::size_t logm = 0;
  while ((std::size_t{1} << logm) < m) ++logm;
  for (std::size_t i = 0; i < m; ++i) {
    std::uint32_t r = 0;
    for (std::size_t b = 0; b < logm; ++b)
      if (i & (std::size_t{1} << b)) r |= std::uint32_t(1) << (logm - 1 - b);
    plan->bitrev[i] = r;
  }
  plan->twiddle.resize(m / 2);
  for (std::size_t k = 0; k < m / 2; ++k) {
    double ang = -2.0 * pi * double(k) / double(m);
    plan->twiddle[k] = cd(std::cos(ang), std::sin(ang));
  }

  if (!plan->pow2) {
    plan->chirp.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      // j^2 mod 2n keeps the phase argument small and exact.
      std::size_t jsq = (j * j) % (2 * n);
      double ang = pi * double(jsq) / double(n);
      plan->chirp[j] = cd(std::cos(ang), std::sin(ang));
    }
    std::vector<cd> b(m, cd(0.0, 0.0));
    b[0] = plan->chirp[0];
    for (std::size_t j = 1; j < n; ++j) {
      b[j] = plan->chirp[j];
      b[m - j] = plan->chirp[j];
    }
    radix2_inplace(b, *plan, false);
    plan->chirp_fft = std::move(b);
  }
  return plan;
}

inline std::shared_ptr<const FftPlan> get_plan(std::size_t n) {
  thread_local std::shared_ptr<const FftPlan> last;
  if (last && last->n == n) return last;
  static std::mutex mu;
  static std::unordered_map<std::size_t, std::shared_ptr<const FftPlan>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_plan(n)).first;
  last = it->second;
  return last;
}

inline void transform(std::vector<cd>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n == 0) throw std::invalid_argument("fft: empty input");
  if (n == 1) return;
  auto plan = get_plan(n);

  if (plan->pow2) {
    radix2_inplace(a, *plan, inverse);
    if (inverse) {
      double inv_n = 1.0 / double(n);
      for (auto& v : a) v *= inv_n;
    }
    return;
  }

  // Bluestein: X_k = conj(c_k) * IFFT(FFT(x conj(c)) . FFT(c-pad))_k.
  // The inverse transform reuses the forward machinery via conjugation.
  if (inverse) {
    for (auto& v : a) v = std::conj(v);
    transform(a, false);
    double inv_n = 1.0 / double(n);
    for (auto& v : a) v = std::conj(v) * inv_n;
    return;
  }
  const std::size_t m = plan->m;
  std::vector<cd> u(m, cd(0.0, 0.0));
  for (std::size_t j = 0; j < n; ++j) u[j] = a[j] * std::conj(plan->chirp[j]);
  radix2_inplace(u, *plan, false);
  for (std::size_t j = 0; j < m; ++j) u[j] *= plan->chirp_fft[j];
  radix2_inplace(u, *plan, true);
  double inv_m = 1.0 / double(m);
  for (std::size_t k = 0; k < n; ++k) a[k] = std::conj(plan->chirp[k]) * u[k] * inv_m;
}

}  // namespace detail

/// Forward DFT, X_k = sum_j x_j exp(-2 pi i j k / n).
inline void fft_inplace(std::vector<std::complex<double>>& a) { detail::transform(a, false); }

/// Inverse DFT with the 1/n normalization.
inline void ifft_inplace(std::vector<std::complex<double>>& a) { detail::transform(a, true); }

}  // namespace flume

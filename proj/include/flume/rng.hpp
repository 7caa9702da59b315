#pragma once
/**
 * @file rng.hpp
 * @brief Counter-based Gaussian increments (Philox4x32-10).
 *
 * Every Wiener increment is a pure function of
 * (master_seed, realization_id, step_index, mode_index), so draws are
 * reproducible and independent of evaluation order, threading, or how many
 * other draws happened before.
 */

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace flume {

namespace detail {

/// One block of the Philox4x32 bijection, 10 rounds.
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
  constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    std::uint64_t p0 = std::uint64_t(M0) * ctr[0];
    std::uint64_t p1 = std::uint64_t(M1) * ctr[2];
    ctr = {std::uint32_t(p1 >> 32) ^ ctr[1] ^ key[0], std::uint32_t(p1),
           std::uint32_t(p0 >> 32) ^ ctr[3] ^ key[1], std::uint32_t(p0)};
    key[0] += W0;
    key[1] += W1;
  }
  return ctr;
}

inline double uniform_open_closed(std::uint64_t bits) {
  // (0, 1]: top 53 bits shifted into the mantissa range, then offset by one ulp.
  return (double(bits >> 11) + 1.0) * 0x1.0p-53;
}

inline double uniform_closed_open(std::uint64_t bits) {
  return double(bits >> 11) * 0x1.0p-53;  // [0, 1)
}

}  // namespace detail

/// Standard normal draw for one (seed, realization, step, mode) key.
inline double normal_draw(std::uint64_t master_seed, std::uint32_t realization_id,
                          std::uint64_t step_index, std::uint32_t mode_index) {
  auto words = detail::philox4x32(
      {mode_index, std::uint32_t(step_index), std::uint32_t(step_index >> 32),
       realization_id},
      {std::uint32_t(master_seed), std::uint32_t(master_seed >> 32)});
  std::uint64_t a = (std::uint64_t(words[0]) << 32) | words[1];
  std::uint64_t b = (std::uint64_t(words[2]) << 32) | words[3];
  double u1 = detail::uniform_open_closed(a);
  double u2 = detail::uniform_closed_open(b);
  const double two_pi = 2.0 * std::acos(-1.0);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

/// Brownian increments over one substep: dW[k] ~ N(0, dt), independent per
/// mode and per step index.
struct WienerIncrement {
  std::uint64_t step_index = 0;
  double dt = 0.0;
  std::vector<double> dW;
};

inline WienerIncrement sample_increments(std::uint64_t master_seed,
                                         std::uint32_t realization_id,
                                         std::uint64_t step_index, int n_modes, double dt) {
  if (n_modes < 0) throw std::invalid_argument("sample_increments: negative mode count");
  if (dt < 0.0) throw std::domain_error("sample_increments: negative dt");
  WienerIncrement inc;
  inc.step_index = step_index;
  inc.dt = dt;
  inc.dW.resize(n_modes);
  double scale = std::sqrt(dt);
  for (int k = 0; k < n_modes; ++k)
    inc.dW[k] = scale * normal_draw(master_seed, realization_id, step_index,
                                    std::uint32_t(k));
  return inc;
}

}  // namespace flume

/// @file test_fft.cpp
/// @brief Transform correctness against a naive DFT, round trips, and the
///        non power-of-two fallback.

#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <random>
#include <vector>

#include "flume/fft.hpp"
#include "support/oracles.hpp"

using namespace flume;
using cd = std::complex<double>;

namespace {

std::vector<cd> random_signal(int n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  std::vector<cd> x(n);
  for (auto& v : x) v = cd(ud(gen), ud(gen));
  return x;
}

}  // namespace

TEST_CASE("forward transform matches the naive DFT") {
  for (int n : {4, 8, 16, 64, 5, 12, 37, 48}) {
    auto x = random_signal(n, 100 + n);
    auto ref = oracle::naive_dft(x);
    auto got = x;
    fft_inplace(got);
    for (int k = 0; k < n; ++k)
      CHECK(std::abs(got[k] - ref[k]) <= 1e-12 * (1.0 + std::abs(ref[k])));
  }
}

TEST_CASE("round trip is the identity") {
  for (int n : {4, 256, 1024, 12, 37, 100}) {
    auto x = random_signal(n, 200 + n);
    auto y = x;
    fft_inplace(y);
    ifft_inplace(y);
    for (int i = 0; i < n; ++i) CHECK(std::abs(y[i] - x[i]) <= 1e-12);
  }
}

TEST_CASE("impulse and constant spectra") {
  std::vector<cd> delta(8, cd(0.0, 0.0));
  delta[0] = 1.0;
  fft_inplace(delta);
  for (auto& v : delta) CHECK(std::abs(v - cd(1.0, 0.0)) <= 1e-15);

  std::vector<cd> ones(8, cd(1.0, 0.0));
  fft_inplace(ones);
  CHECK(std::abs(ones[0] - cd(8.0, 0.0)) <= 1e-14);
  for (int k = 1; k < 8; ++k) CHECK(std::abs(ones[k]) <= 1e-14);
}

TEST_CASE("transforms reject empty input") {
  std::vector<cd> empty;
  CHECK_THROWS_AS(fft_inplace(empty), std::invalid_argument);
}

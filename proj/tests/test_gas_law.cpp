/// @file test_gas_law.cpp
/// @brief Gas-law constants, flux, Riemann coordinates, and the
///        shallow-water scaling bridge.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "flume/gas_law.hpp"
#include "flume/grid.hpp"
#include "flume/state.hpp"
#include "support/oracles.hpp"

using namespace flume;

namespace {
const double kPi = std::acos(-1.0);
}

TEST_CASE("derived constants at gamma = 2") {
  GasLaw law = GasLaw::normalized(2.0);
  CHECK(law.theta == Catch::Approx(0.5).epsilon(1e-15));
  CHECK(law.kappa == Catch::Approx(0.125).epsilon(1e-15));
  CHECK(law.lambda == Catch::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(law.c_lambda - 2.0 / kPi) <= 1e-12);

  // Independent route: trapezoid integration of the weight itself.  The
  // sqrt-type endpoint behaviour limits trapezoid accuracy to ~h^(3/2).
  double mass = oracle::trapezoid(
      [&](double z) { return std::pow(std::max(1.0 - z * z, 0.0), law.lambda); }, -1.0, 1.0,
      1000000);
  CHECK(std::abs(1.0 / mass - law.c_lambda) <= 1e-8);
}

TEST_CASE("derived constants across adiabatic exponents") {
  for (double gamma : {1.4, 2.0, 3.0}) {
    GasLaw law = GasLaw::normalized(gamma);
    CHECK(law.lambda > -0.5);
    CHECK(law.c_lambda > 0.0);
    double mass = oracle::trapezoid(
        [&](double z) { return std::pow(std::max(1.0 - z * z, 0.0), law.lambda); }, -1.0, 1.0,
        400000);
    double tol = (gamma == 2.0) ? 1e-8 : 1e-10;
    CHECK(std::abs(1.0 / mass - law.c_lambda) <= tol * law.c_lambda);
  }
  // gamma = 1.4 gives a polynomial weight exponent.
  CHECK(GasLaw::normalized(1.4).lambda == Catch::Approx(2.0).epsilon(1e-14));
  CHECK(GasLaw::normalized(3.0).lambda == Catch::Approx(0.0).margin(1e-14));
}

TEST_CASE("construction validates the exponent and gravity") {
  CHECK_THROWS_AS(GasLaw::normalized(1.0), std::domain_error);
  CHECK_THROWS_AS(GasLaw::normalized(0.5), std::domain_error);
  CHECK_THROWS_AS(GasLaw::shallow_water(0.0), std::domain_error);
  CHECK_THROWS_AS(GasLaw::shallow_water(-2.0), std::domain_error);
}

TEST_CASE("pressure law in both modes") {
  GasLaw norm = GasLaw::normalized(2.0);
  CHECK(pressure(norm, 1.0) == Catch::Approx(0.125).epsilon(1e-15));
  CHECK(pressure(norm, 0.0) == 0.0);

  GasLaw sw = GasLaw::shallow_water(2.0);
  CHECK(sw.pressure_coeff == Catch::Approx(1.0).epsilon(1e-15));
  CHECK(pressure(sw, 1.0) == Catch::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(pressure(norm, -1e-8), std::domain_error);
}

TEST_CASE("sound speed in both modes") {
  GasLaw norm = GasLaw::normalized(2.0);
  CHECK(sound_speed(norm, 1.0) == Catch::Approx(0.5).epsilon(1e-14));
  CHECK(sound_speed(norm, 0.0) == 0.0);

  GasLaw sw = GasLaw::shallow_water(2.0);
  CHECK(sound_speed(sw, 1.0) == Catch::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("physical flux") {
  GasLaw law = GasLaw::normalized(2.0);
  auto f = flux_cell(law, 1.0, 2.0);
  CHECK(f[0] == 2.0);  // first component is q exactly, no roundoff allowed
  CHECK(f[1] == Catch::Approx(4.0 + 0.125).epsilon(1e-15));

  auto fv = flux_cell(law, 0.0, 0.0);
  CHECK(fv[0] == 0.0);
  CHECK(fv[1] == 0.0);

  std::mt19937_64 gen(91);
  std::uniform_real_distribution<double> rd(1e-6, 10.0), qd(-10.0, 10.0);
  for (int i = 0; i < 100; ++i) {
    double rho = rd(gen), q = qd(gen);
    CHECK(flux_cell(law, rho, q)[0] == q);
  }
}

TEST_CASE("riemann invariants and reconstruction") {
  GasLaw law = GasLaw::normalized(2.0);
  double z, w;
  riemann_invariants_cell(law, 1.0, 0.0, z, w);
  CHECK(z == Catch::Approx(-1.0).epsilon(1e-15));
  CHECK(w == Catch::Approx(1.0).epsilon(1e-15));

  riemann_invariants_cell(law, 0.0, 0.0, z, w);
  CHECK(z == 0.0);
  CHECK(w == 0.0);

  for (double gamma : {1.4, 2.0, 3.0}) {
    GasLaw g = GasLaw::normalized(gamma);
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> rd(1e-4, 10.0), ud(-10.0, 10.0);
    for (int i = 0; i < 200; ++i) {
      double rho = rd(gen), u = ud(gen);
      riemann_invariants_cell(g, rho, rho * u, z, w);
      CHECK(z <= w);
      double back = density_from_invariants(g, z, w);
      CHECK(back == Catch::Approx(rho).epsilon(1e-12));
      CHECK(0.5 * (z + w) == Catch::Approx(u).margin(1e-12 * (1.0 + std::abs(u))));
    }
  }
}

TEST_CASE("invariant region membership") {
  GasLaw law = GasLaw::normalized(2.0);
  ConservedField f = make_field({1.0, 4.0, 1.0}, {0.0, 0.0, 3.0});
  auto pair = riemann_invariants(law, f);
  // states: (z,w) = (-1,1), (-2,2), (3-1, 3+1)
  auto inside = in_invariant_region(pair, 4.0);
  CHECK(inside.all_inside);
  CHECK(inside.violations == 0);
  auto tight = in_invariant_region(pair, 1.5);
  CHECK_FALSE(tight.all_inside);
  CHECK(tight.violations == 2);
}

TEST_CASE("field construction enforces the vacuum convention") {
  CHECK_THROWS_AS(make_field({-1e-9}, {0.0}), std::domain_error);
  ConservedField f = make_field({0.0, 1.0}, {5.0, 2.0});
  CHECK(f.q[0] == 0.0);  // momentum wiped where density vanishes
  CHECK(f.q[1] == 2.0);
  CHECK(velocity(0.0, 123.0) == 0.0);
}

TEST_CASE("shallow-water scaling bridge") {
  GasLaw sw = GasLaw::shallow_water(2.0);
  double beta = shallow_water_scale(sw);
  CHECK(beta == Catch::Approx(8.0).epsilon(1e-14));

  GasLaw norm = GasLaw::normalized(2.0);
  CHECK(shallow_water_scale(norm) == Catch::Approx(1.0).epsilon(1e-14));

  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> hd(1e-3, 5.0), ud(-5.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    double h = hd(gen), u = ud(gen);
    // Scaled state has the physical sound speed and characteristics.
    double scaled = beta * h;
    CHECK(sound_speed(norm, scaled) ==
          Catch::Approx(sound_speed(sw, h)).epsilon(1e-13));
    double z, w;
    riemann_invariants_cell(norm, scaled, scaled * u, z, w);
    CHECK(w - u == Catch::Approx(2.0 * std::sqrt(2.0 * h)).epsilon(1e-13));
    // Pressure of the scaled state is beta times the physical pressure.
    CHECK(pressure(norm, scaled) == Catch::Approx(beta * pressure(sw, h)).epsilon(1e-13));
    // Round trip.
    CHECK(scaled / beta == Catch::Approx(h).epsilon(1e-14));
  }
}

TEST_CASE("grid basics") {
  CHECK_THROWS_AS(Grid(3), std::domain_error);
  Grid g(8);
  CHECK(g.dx == Catch::Approx(0.125).epsilon(1e-16));
  CHECK(g.x(0) == Catch::Approx(0.0625).epsilon(1e-16));
  CHECK(g.wrap(-1) == 7);
  CHECK(g.wrap(8) == 0);

  ConservedField f = make_field({1.0, 2.0, 3.0, 2.0, 1.0, 1.0, 1.0, 1.0}, {1.0, -1.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.5});
  CHECK(total_mass(g, f) == Catch::Approx(12.0 * 0.125).epsilon(1e-15));
  CHECK(total_momentum(g, f) == Catch::Approx(1.0 * 0.125).epsilon(1e-15));
}

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "tfdw/error.hpp"
#include "support/oracles.hpp"
#include "tfdw/specfun.hpp"

using namespace tfdw;
using namespace tfdw::specfun;
using namespace tfdw::testing;

namespace {

constexpr double pi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("gamma values") {
  CHECK(specfun::gamma(1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rel(specfun::gamma(0.5), std::sqrt(pi)) < 1e-14);
  const double ac = specfun::gamma(0.25) * specfun::gamma(0.25) / (2 * specfun::gamma(0.75) * specfun::gamma(0.75));
  CHECK(std::abs(ac - 4.3769) < 1e-3);
  for (double x = -9.75; x <= 30.0; x += 0.37) {
    if (x <= 0 && x == std::floor(x)) continue;
    CHECK(rel(specfun::gamma(x), std::tgamma(x)) < 1e-12);
  }
}

TEST_CASE("gamma poles") {
  for (double x : {0.0, -1.0, -2.0, -7.0}) {
    try {
      specfun::gamma(x);
      FAIL("expected pole");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Pole);
    }
  }
  CHECK_THROWS_AS(specfun::gamma(200.0), Error);
}

TEST_CASE("gamma recurrence and reflection") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> pos(0.1, 20.0), any(-5.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    const double x = pos(rng);
    CHECK(rel(specfun::gamma(x + 1), x * specfun::gamma(x)) < 1e-12);
  }
  for (int i = 0; i < 100; ++i) {
    const double x = any(rng);
    CHECK(rel(specfun::gamma(x) * specfun::gamma(1 - x), pi / std::sin(pi * x)) < 1e-10);
  }
}

TEST_CASE("bessel_y0") {
  const double z = 1e-6;
  CHECK(std::abs(bessel_y0(z) - 2 / pi * (std::log(z / 2) + euler_gamma)) < 1e-8);
  CHECK(std::abs(bessel_y0(1.0) - (double)y0_series_oracle(1.0L, 30)) < 1e-10);
  const double big = 100.0;
  const double lead = std::sqrt(2 / (pi * big)) * std::sin(big - pi / 4);
  CHECK(rel(bessel_y0(big), lead) < 1e-3);
  for (double x = 0.05; x <= 500.0; x *= 1.17) {
    const double ref = std::cyl_neumann(0.0, x);
    CHECK(std::abs(bessel_y0(x) - ref) < 1e-10 * std::max(1.0, std::abs(ref)) + 1e-12);
  }
  // both sides of the series/asymptotic switch
  for (double x : {series_crossover - 1e-9, series_crossover + 1e-9})
    CHECK(std::abs(bessel_y0(x) - std::cyl_neumann(0.0, x)) < 1e-12);
  CHECK_THROWS_AS(bessel_y0(0.0), Error);
  CHECK_THROWS_AS(bessel_y0(-1.0), Error);
}

TEST_CASE("bessel_j0 against the standard library") {
  for (double x = 0.0; x <= 500.0; x += 0.731)
    CHECK(std::abs(bessel_j0(x) - std::cyl_bessel_j(0.0, x)) < 1e-12);
}

TEST_CASE("struve_h0") {
  CHECK(struve_h0(0.0) == 0.0);
  CHECK(std::abs(struve_h0(2.0) - (double)h0_series_oracle(2.0L, 40)) < 1e-10);
  const double z = 200.0;
  CHECK(std::abs(struve_h0(z) - bessel_y0(z) - 2 / (pi * z)) < 1e-5);
  // z in {1, 5, 20}: extended-precision series oracle, 8 significant digits
  for (double x : {1.0, 5.0, 20.0}) {
    const double ref = (double)h0_series_oracle(x, 120);
    CHECK(rel(struve_h0(x), ref) < 1e-8);
  }
  // continuity across the switch
  for (double x : {series_crossover - 1e-9, series_crossover + 1e-9})
    CHECK(std::abs(struve_h0(x) - (double)h0_series_oracle(x, 120)) < 1e-10);
  // the large-z remainder matches its leading asymptotic term 2/(pi z^3)
  CHECK(rel(struve_y0_remainder(300.0), 2 / (pi * std::pow(300.0, 3))) < 1e-4);
  CHECK_THROWS_AS(struve_h0(-0.5), Error);
}

TEST_CASE("bessel_i0") {
  CHECK(bessel_i0(0.0) == 1.0);
  CHECK(std::abs(bessel_i0(1.0) - (double)i0_series_oracle(1.0L, 40)) < 1e-12);
  const double z = 100.0;
  CHECK(rel(bessel_i0(z), std::exp(z) / std::sqrt(2 * pi * z) * (1 + 1 / (8 * z))) < 1e-3);
  for (double x = 0.0; x <= 700.0; x += 3.3)
    CHECK(rel(bessel_i0(x), std::cyl_bessel_i(0.0, x)) < 1e-10);
  for (double x : {series_crossover - 1e-9, series_crossover + 1e-9})
    CHECK(rel(bessel_i0(x), (double)i0_series_oracle(x, 120)) < 1e-13);
  CHECK(rel(bessel_i0_scaled(1000.0), 1 / std::sqrt(2 * pi * 1000.0) * (1 + 1 / 8000.0 + 9 / (2 * 64e6))) < 1e-10);
  try {
    bessel_i0(701.0);
    FAIL("expected overflow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Overflow);
  }
}

TEST_CASE("error estimates are nonnegative") {
  for (double x : {0.3, 2.0, 17.0, 90.0}) {
    CHECK(gamma_e(x).est_error >= 0);
    CHECK(bessel_y0_e(x).est_error >= 0);
    CHECK(struve_h0_e(x).est_error >= 0);
    CHECK(bessel_i0_e(x).est_error >= 0);
  }
}

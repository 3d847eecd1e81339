#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tfdw/error.hpp"
#include "tfdw/model.hpp"
#include "tfdw/operators.hpp"

using namespace tfdw;

TEST_CASE("S and Phi values") {
  CHECK(s_of_u(0.0, 0.0) == 0.0);
  CHECK(s_of_u(0.0, 3.0) == 0.0);
  CHECK(s_of_u(1.0, 1.0) == 3.0);
  CHECK(s_of_u(-2.0, 1.0) == -2.0);
  CHECK(phi_of_u(0.0, 2.0) == 0.0);
  CHECK(phi_of_u(-1.0, 1.0) == doctest::Approx(1.0 / 3.0));
  CHECK(phi_of_u(2.0, 1.0) == doctest::Approx(28.0 / 3.0));
  CHECK(s_prime(-3.0, 1.0) == 4.0);
  // second branch closed form -u^2 - 2 ubar u - 2 ubar^2
  for (double u : {-1.5, -4.0, -10.0}) CHECK(s_of_u(u, 1.0) == doctest::Approx(-u * u - 2 * u - 2));
}

TEST_CASE("S and Phi are C1 across the kink") {
  for (double ubar : {0.5, 1.0, 5.0}) {
    const double u0 = -ubar, d = 1e-7;
    auto one_sided = [&](auto f, double sgn) { return sgn * (f(u0 + sgn * d, ubar) - f(u0, ubar)) / d; };
    const double sl = one_sided(s_of_u, -1.0), sr = one_sided(s_of_u, 1.0);
    const double pl = one_sided(phi_of_u, -1.0), pr = one_sided(phi_of_u, 1.0);
    CHECK(std::abs(sl - sr) < 1e-6);
    CHECK(std::abs(pl - pr) < 1e-6);
    CHECK(std::abs(sr - s_prime(u0, ubar)) < 1e-6);
    CHECK(std::abs(pr - phi_prime(u0, ubar)) < 1e-6);
  }
}

TEST_CASE("Phi' = u S' by finite differences") {
  for (double ubar : {0.0, 1.0, 5.0})
    for (double u = -7.3; u < 7.0; u += 0.61) {
      const double d = 1e-6;
      const double fd = (phi_of_u(u + d, ubar) - phi_of_u(u - d, ubar)) / (2 * d);
      CHECK(fd == doctest::Approx(phi_prime(u, ubar)).epsilon(1e-6));
      const double fs = (s_of_u(u + d, ubar) - s_of_u(u - d, ubar)) / (2 * d);
      CHECK(fs == doctest::Approx(s_prime(u, ubar)).epsilon(1e-6));
    }
}

TEST_CASE("two-sided bounds on Phi and S") {
  // Constants from a dense scan: inf Phi/(ubar u^2+|u|^3) = 0.1130..,
  // inf S sgn(u)/(ubar|u|+u^2) = 2(sqrt 10 - 3) = 0.3245.., both suprema < 2.
  const double c_phi = 0.11, c_s = 0.32, upper = 2.0;
  for (double ubar : {0.0, 1.0, 5.0})
    for (int i = -50000; i <= 50000; ++i) {
      const double u = i * 1e-3;
      if (u == 0.0) {
        CHECK(phi_of_u(u, ubar) == 0.0);
        continue;
      }
      const double au = std::abs(u);
      const double phi = phi_of_u(u, ubar), s = s_of_u(u, ubar) * (u > 0 ? 1 : -1);
      const double bp = ubar * u * u + au * au * au, bs = ubar * au + u * u;
      CHECK_MESSAGE(phi >= c_phi * bp, "u=" << u << " ubar=" << ubar);
      CHECK(phi <= upper * bp);
      CHECK(s >= c_s * bs);
      CHECK(s <= upper * bs);
      CHECK(phi > 0.0);
    }
}

TEST_CASE("reflected nonlinearities") {
  for (double ubar : {0.0, 0.8})
    for (double u = -3; u < 3; u += 0.13) {
      const double r = reflect(u, ubar);
      CHECK(r >= -ubar);
      CHECK(s_plus(u, ubar) == doctest::Approx(s_of_u(r, ubar)));
      if (u >= -ubar) {
        CHECK(s_plus(u, ubar) == doctest::Approx(s_of_u(u, ubar)));
        CHECK(phi_plus(u, ubar) == doctest::Approx(phi_of_u(u, ubar)));
      }
    }
}

TEST_CASE("potentials") {
  const Grid2D g = make_grid(64, 64.0 * std::sqrt(3.0) / 8.0);
  const Field v = potential_v0(g);
  const std::size_t o = g.origin_index();
  CHECK(v.at(o, o) == -1.0);
  CHECK(v.at(o + 8, o) == doctest::Approx(-0.5));  // |x| = sqrt 3
  const double r = 100.0;
  CHECK(std::abs(-1.0 / std::sqrt(1 + r * r) - (-0.01)) < 1e-4);

  const Field vc = potential_from_charges(g, unit_charge());
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(vc[i] == v[i]);
  CHECK(half_laplacian_of_v(g, unit_charge()).at(o, o) == -1.0);

  const Grid2D g2 = make_grid(16, 16.0);
  ChargeMeasure two{{PointCharge{1.0, {1.0, 0.0}, 0.0}, PointCharge{1.0, {-1.0, 0.0}, 0.0}}};
  CHECK(potential_from_charges(g2, two).at(8, 8) == doctest::Approx(-std::sqrt(2.0)));
  CHECK_THROWS_AS(potential_from_charges(g2, ChargeMeasure{}), Error);
}

TEST_CASE("Hdot^{1/2} norm of V from the closed forms") {
  const Grid2D g = make_grid(1024, 200.0);
  const double base = v_h_half_norm_sq(g, unit_charge());
  // int (1+r^2)^{-2} d^2x = pi, less the part outside the box (about pi/(L/2)^2)
  CHECK(std::abs(base / std::numbers::pi - 1.0) < 1e-3);
  ChargeMeasure scaled{{PointCharge{2.5, {0, 0}, 0}}};
  CHECK(v_h_half_norm_sq(g, scaled) == doctest::Approx(6.25 * base).epsilon(1e-12));
  ChargeMeasure raised{{PointCharge{1.0, {0, 0}, 1.0}}};
  const double z1 = v_h_half_norm_sq(g, raised);
  CHECK(z1 < base);
  // radial oracle: int (2)/(4+r^2)^2 d^2x = 2 pi * 2 / (2*4) = pi/2
  CHECK(z1 == doctest::Approx(std::numbers::pi / 2).epsilon(2e-3));
}

TEST_CASE("charge measure JSON") {
  const auto mu = parse_charge_measure(R"({"charges":[{"c":1.0,"y":[0,0],"z":0.0},{"c":-0.5,"y":[2,1]}]})");
  REQUIRE(mu.charges.size() == 2);
  CHECK(mu.charges[1].c == -0.5);
  CHECK(mu.charges[1].y[0] == 2.0);
  CHECK(mu.charges[1].z == 0.0);
  CHECK_THROWS_AS(parse_charge_measure("{\"charges\":[]}"), Error);
  CHECK_THROWS_AS(parse_charge_measure("{not json"), Error);
  CHECK_THROWS_AS(parse_charge_measure(R"({"charges":[{"c":1,"y":[0],"z":0}]})"), Error);
  CHECK_THROWS_AS(read_charge_measure("/nonexistent/charges.json"), Error);
}

TEST_CASE("parameter normalization") {
  const ModelParams p = make_params(1.0, 2.0, -4.0);
  CHECK(p.rho_bar == 4.0);
  CHECK(p.sign_flipped);
  CHECK(p.ubar() == 2.0);
  const Grid2D g = make_grid(16, 4.0);
  const Field v = potential_v0(g);
  CHECK(oriented_potential(p, v)[5] == -v[5]);
  CHECK_THROWS_AS(make_params(-1.0, 1.0, 0.0), Error);
  CHECK_THROWS_AS(make_params(1.0, 0.0, 0.0), Error);
}

TEST_CASE("physical rescaling") {
  PhysicalSetup s;
  s.Z = 1.0;
  s.d = 3e-8;
  s.eps_d = 1.0;
  const double hbar = 1.054571817e-27, vf = 1e8;
  s.C_TFD = hbar * vf * std::sqrt(std::numbers::pi);
  s.C_W = hbar * vf;
  const Rescaling r1 = rescale_physical(s);
  // b = Z e^4 / (eps^2 C_TFD^2) = alpha^2 / pi with alpha = e^2/(hbar v_F)
  const double alpha = std::sqrt(std::numbers::pi * r1.b);
  CHECK(std::abs(alpha - 2.2) < 0.05);
  s.Z = 2.0;
  const Rescaling r2 = rescale_physical(s);
  CHECK(r2.a == doctest::Approx(r1.a / 2));
  CHECK(r2.b == doctest::Approx(r1.b * 2));
  CHECK(r2.a * r2.b == doctest::Approx(r1.a * r1.b));
  CHECK(r1.a * r1.b == doctest::Approx(s.C_W * s.e * s.e / (s.eps_d * s.C_TFD * s.C_TFD)));
  CHECK(r1.lambda == doctest::Approx(1 / s.d));
  // a = gamma C_W / (kappa lambda), b = gamma e^2 / (eps kappa^2 lambda^3)
  CHECK(r1.a == doctest::Approx(r1.gamma * s.C_W / (r1.kappa * r1.lambda)));
  CHECK(r1.b == doctest::Approx(r1.gamma * s.e * s.e / (s.eps_d * r1.kappa * r1.kappa * std::pow(r1.lambda, 3))));
  s.d = -1.0;
  CHECK_THROWS_AS(rescale_physical(s), Error);
}

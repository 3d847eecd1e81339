#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "support/fields.hpp"
#include "tfdw/error.hpp"
#include "tfdw/operators.hpp"
#include "tfdw/specfun.hpp"

using namespace tfdw;
using std::numbers::pi;

namespace {

// (-Delta)^{1/2} exp(-r^2) = sqrt(pi) 1F1(3/2; 1; -r^2).
double half_lap_gaussian(double r) {
  const double z = r * r;
  if (r < 10.0) {
    // Kummer: 1F1(3/2;1;-z) = e^{-z} 1F1(-1/2;1;z)
    long double term = 1.0L, sum = 1.0L;
    for (int n = 0; n < 2000; ++n) {
      term *= (n - 0.5L) * z / ((n + 1.0L) * (n + 1.0L));
      sum += term;
      if (std::fabs(term) < 1e-22L * std::fabs(sum)) break;
    }
    return std::sqrt(pi) * static_cast<double>(std::exp(-static_cast<long double>(z)) * sum);
  }
  // -(1/(2 r^3)) sum ((3/2)_n)^2 / n! r^{-2n}
  double c = 1.0, s = 0.0;
  for (int n = 0; n < 40; ++n) {
    s += c;
    c *= (1.5 + n) * (1.5 + n) / ((n + 1.0) * z);
    if (c < 1e-18) break;
  }
  return -0.5 * s / (z * r);
}

double max_abs_diff(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i)
    m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

double inner_max_abs_diff(const Field& a, const Field& b, double radius) {
  const Grid2D& g = a.grid();
  double m = 0.0;
  for (std::size_t i = 0; i < g.n(); ++i)
    for (std::size_t j = 0; j < g.n(); ++j)
      if (std::abs(g.coord(i)) <= radius && std::abs(g.coord(j)) <= radius)
        m = std::max(m, std::abs(a.at(i, j) - b.at(i, j)));
  return m;
}

}  // namespace

TEST_CASE("symbol invariants") {
  const Grid2D g = make_grid(32, 5.0);
  SpectralPlan plan(g);
  const auto sym = plan.symbol();
  const std::size_t n = 32, nc = n / 2 + 1;
  REQUIRE(sym.size() == n * nc);
  CHECK(sym[0] == 0.0);
  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 0; j < nc; ++j) CHECK(sym[i * nc + j] == sym[(n - i) * nc + j]);
  CHECK(sym[1] == doctest::Approx(2 * pi / 5.0));
}

TEST_CASE("half_laplacian basics") {
  const Grid2D g = make_grid(64, 10.0);
  SpectralPlan plan(g);
  const Field c = Field::sample(g, [](double, double) { return 3.0; });
  CHECK(max_abs_diff(half_laplacian(plan, c), Field(g)) < 1e-13);

  const double k0x = 2 * pi * 3 / 10.0, k0y = 2 * pi * -2 / 10.0;
  const double k0 = std::hypot(k0x, k0y);
  const Field u = Field::sample(g, [&](double x, double y) { return std::cos(k0x * x + k0y * y); });
  const Field expect = Field::sample(g, [&](double x, double y) { return k0 * std::cos(k0x * x + k0y * y); });
  CHECK(max_abs_diff(half_laplacian(plan, u), expect) < 1e-12);

  const Field hu = half_laplacian(plan, u);
  CHECK(std::abs(integrate(hu)) < 1e-10);
  CHECK_THROWS_AS(half_laplacian(plan, Field(make_grid(32, 10.0))), Error);
}

TEST_CASE("half_laplacian of a Gaussian matches the periodized closed form") {
  const double L = 40.0;
  const Grid2D g = make_grid(512, L);
  SpectralPlan plan(g);
  const Field u = Field::sample(g, [](double x, double y) { return std::exp(-x * x - y * y); });
  const Field hu = half_laplacian(plan, u);

  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> pick(128, 383);
  constexpr int images = 30;
  // Images outside the square |m|_inf <= images contribute about
  // -(1/(2 L^3)) * 4 sqrt(2) / (images + 1/2).
  const double tail = -0.5 / (L * L * L) * 4.0 * std::numbers::sqrt2 / (images + 0.5);
  double worst = 0.0;
  for (int s = 0; s < 20; ++s) {
    const std::size_t i = pick(rng), j = pick(rng);
    const double x = g.coord(i), y = g.coord(j);
    double oracle = tail;
    for (int mx = -images; mx <= images; ++mx)
      for (int my = -images; my <= images; ++my)
        oracle += half_lap_gaussian(std::hypot(x + mx * L, y + my * L));
    worst = std::max(worst, std::abs(hu.at(i, j) - oracle));
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("riesz_potential of a point source") {
  const Grid2D g = make_grid(256, 40.0);
  SpectralPlan plan(g);
  // unit-mass Gaussian bump one cell wide
  const double w = g.spacing();
  const Field bump = Field::sample(g, [w](double x, double y) { return std::exp(-(x * x + y * y) / (w * w)); });
  const double mass = integrate(bump);
  std::vector<double> scaled(bump.values().begin(), bump.values().end());
  for (double& x : scaled) x /= mass;
  const Field f(g, std::move(scaled));
  const Field u = riesz_potential(plan, f);
  const double h = g.spacing();
  double worst = 0.0;
  for (std::size_t i = 0; i < g.n(); ++i)
    for (std::size_t j = 0; j < g.n(); ++j) {
      const double r = std::hypot(g.coord(i), g.coord(j));
      if (r < 4 * h || r > g.box_length() / 4) continue;
      const double exact = 1.0 / (2 * pi * r);
      worst = std::max(worst, std::abs(u.at(i, j) - exact) / exact);
    }
  CHECK(worst < 0.02);
  CHECK(max_abs_diff(riesz_potential(plan, Field(g)), Field(g)) == 0.0);
}

TEST_CASE("riesz_potential is symmetric and positive definite") {
  const Grid2D g = make_grid(64, 16.0);
  SpectralPlan plan(g);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 5; ++t) {
    const Field f = testing::packet_field(g, testing::random_packets(rng, 4, 3.0, 0.8, 1.6, 1.0));
    const Field w = testing::packet_field(g, testing::random_packets(rng, 4, 3.0, 0.8, 1.6, 1.0));
    const double fw = integrate(Field(g, [&] {
      auto v = riesz_potential(plan, w).take_values();
      for (std::size_t i = 0; i < v.size(); ++i) v[i] *= f.values()[i];
      return v;
    }()));
    const double wf = integrate(Field(g, [&] {
      auto v = riesz_potential(plan, f).take_values();
      for (std::size_t i = 0; i < v.size(); ++i) v[i] *= w.values()[i];
      return v;
    }()));
    CHECK(fw == doctest::Approx(wf).epsilon(1e-10));
    CHECK(coulomb_form(plan, f) > 0.0);
  }
  const auto kernel = plan.riesz_kernel();
  CHECK(*std::min_element(kernel.begin(), kernel.end()) > 0.0);
}

TEST_CASE("composition half_laplacian(riesz(f)) on mean-zero fields") {
  // The periodic half-Laplacian applied to a free-space potential picks up
  // the potential's far field outside the box; for mean-zero sources the
  // error falls off with the first nonvanishing multipole.
  std::mt19937_64 rng(3);
  const auto packets = testing::random_packets(rng, 6, 3.0, 0.8, 1.6, 1.0);
  double prev = 0.0;
  for (double L : {40.0, 80.0}) {
    const Grid2D g = make_grid(static_cast<std::size_t>(L * 6.4), L);
    SpectralPlan plan(g);
    const Field f = testing::mean_zero_packet_field(g, packets);
    const double err = inner_max_abs_diff(half_laplacian(plan, riesz_potential(plan, f)), f, L / 4);
    if (prev > 0.0) CHECK(err < prev / 6.0);  // at least L^{-2.5}
    prev = err;
  }
  CHECK(prev < 1e-4);

  // Radially symmetric mean-zero source: no dipole, error ~ L^{-4}.
  const Grid2D g = make_grid(512, 40.0);
  SpectralPlan plan(g);
  const Field f = Field::sample(g, [](double x, double y) {
    const double r2 = x * x + y * y;
    return std::exp(-r2) - 4.0 * std::exp(-4.0 * r2);
  });
  CHECK(inner_max_abs_diff(half_laplacian(plan, riesz_potential(plan, f)), f, 10.0) < 1e-6);
}

TEST_CASE("composition on a Gaussian converges like the box truncation") {
  // A source of mass M leaves an error of order M / L^2.
  double prev = 0.0;
  for (double L : {40.0, 80.0}) {
    const Grid2D g = make_grid(static_cast<std::size_t>(L * 6.4), L);
    SpectralPlan plan(g);
    const Field f = Field::sample(g, [](double x, double y) { return std::exp(-x * x - y * y); });
    const double mean = integrate(f) / (L * L);
    const Field target = Field::sample(g, [&](double x, double y) { return std::exp(-x * x - y * y) - mean; });
    const double err = inner_max_abs_diff(half_laplacian(plan, riesz_potential(plan, f)), target, L / 4);
    CHECK(err * L * L < 1.5);
    if (prev > 0.0) CHECK(err == doctest::Approx(prev / 4).epsilon(0.1));
    prev = err;
  }
}

TEST_CASE("Hdot^{1/2} norm") {
  const Grid2D g = make_grid(64, 10.0);
  SpectralPlan plan(g);
  CHECK(h_half_norm_sq(plan, Field::sample(g, [](double, double) { return 2.0; })) == doctest::Approx(0.0));
  const double kx = 2 * pi * 2 / 10.0, ky = 2 * pi / 10.0;
  const Field u = Field::sample(g, [&](double x, double y) { return std::cos(kx * x + ky * y); });
  CHECK(h_half_norm_sq(plan, u) == doctest::Approx(std::hypot(kx, ky) * 100.0 / 2).epsilon(1e-12));

  // equals integrate(u * half_laplacian(u))
  std::mt19937_64 rng(9);
  const Field w = testing::packet_field(g, testing::random_packets(rng, 3, 2.0, 0.8, 1.5, 2.0));
  const Field hw = half_laplacian(plan, w);
  double direct = 0.0;
  for (std::size_t i = 0; i < w.values().size(); ++i) direct += w.values()[i] * hw.values()[i];
  direct *= g.cell_area();
  CHECK(h_half_norm_sq(plan, w) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("Hdot^{1/2} norm of V0 is pi") {
  const Grid2D g = make_grid(1024, 200.0);
  SpectralPlan plan(g);
  const Field v = Field::sample(g, [](double x, double y) { return -1.0 / std::sqrt(1 + x * x + y * y); });
  CHECK(h_half_norm_sq(plan, v) == doctest::Approx(pi).epsilon(0.03));
}

TEST_CASE("Plancherel against the Gagliardo double integral") {
  // Periodic u: ||u||^2 = (1/4pi) int_box int_R2 |u(x) - u(x+z)|^2 / |z|^3 dz dx.
  const double L = 4.0;
  const Grid2D g = make_grid(16, L);
  SpectralPlan plan(g);
  const double k1 = 2 * pi / L;
  auto fn = [&](double x, double y) { return std::cos(k1 * x) + 0.5 * std::sin(k1 * (x + 2 * y)); };
  const Field u = Field::sample(g, fn);

  constexpr int n_theta = 128;
  const double r_max = 40.0 * L, dr = L / 64.0;
  const int n_r = static_cast<int>(r_max / dr);
  double total = 0.0, mean_sq = 0.0;
  for (std::size_t i = 0; i < g.n(); ++i)
    for (std::size_t j = 0; j < g.n(); ++j) {
      const double x = g.coord(i), y = g.coord(j), ux = fn(x, y);
      mean_sq += ux * ux / static_cast<double>(g.n() * g.n());
      // midpoint rule in r: integrand |u(x) - u(x + r e)|^2 / r^2 is smooth at r = 0
      double inner = 0.0;
      for (int ir = 0; ir < n_r; ++ir) {
        const double r = (ir + 0.5) * dr;
        double ring = 0.0;
        for (int it = 0; it < n_theta; ++it) {
          const double th = 2 * pi * it / n_theta;
          const double d = ux - fn(x + r * std::cos(th), y + r * std::sin(th));
          ring += d * d;
        }
        inner += ring * (2 * pi / n_theta) / (r * r) * dr;
      }
      // beyond r_max, |u(x) - u(x+z)|^2 averages to u(x)^2 + <u^2>
      total += inner * g.cell_area();
    }
  total += L * L * 2.0 * mean_sq * 2 * pi / r_max;
  CHECK(h_half_norm_sq(plan, u) == doctest::Approx(total / (4 * pi)).epsilon(0.05));
}

TEST_CASE("Hdot^{-1/2} norm: closed form for modulated Gaussians") {
  const Grid2D g = make_grid(512, 40.0);
  SpectralPlan plan(g);
  auto closed = [](double a) {
    // (sqrt2/8) pi^{3/2} a e^{-a^2/2} (e^{a^2/4} I0(a^2/4) + 1), with the
    // exponentials folded into the scaled I0
    return std::numbers::sqrt2 / 8 * std::pow(pi, 1.5) * a *
           (specfun::bessel_i0_scaled(a * a / 4) + std::exp(-a * a / 2));
  };
  auto family = [&](double a) {
    return Field::sample(g, [a](double x, double y) { return std::sqrt(a) * std::exp(-x * x - y * y) * std::cos(a * x); });
  };
  for (double a : {4.0, 8.0}) {
    const double got = h_minus_half_norm_sq(plan, family(a), MeanPolicy::Remove);
    CHECK(got == doctest::Approx(closed(a)).epsilon(1e-3));
  }
  double prev = 0.0;
  for (double a : {8.0, 16.0, 24.0}) {
    const double got = h_minus_half_norm_sq(plan, family(a), MeanPolicy::Remove);
    if (prev > 0.0) CHECK(std::abs(got - pi / 4) < std::abs(prev - pi / 4));
    prev = got;
  }
  CHECK(prev == doctest::Approx(pi / 4).epsilon(0.02));
  CHECK(h_minus_half_norm_sq(plan, Field(g)) == 0.0);
}

TEST_CASE("Hdot^{-1/2} norm mean handling") {
  const Grid2D g = make_grid(64, 20.0);
  SpectralPlan plan(g);
  const Field bump = Field::sample(g, [](double x, double y) { return std::exp(-x * x - y * y); });
  CHECK_THROWS_AS(h_minus_half_norm_sq(plan, bump), Error);
  try {
    h_minus_half_norm_sq(plan, bump);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonzeroMean);
  }
  const double removed = h_minus_half_norm_sq(plan, bump, MeanPolicy::Remove);
  CHECK(removed > 0.0);
  const Field shifted = Field::sample(g, [](double x, double y) { return std::exp(-x * x - y * y) + 1.0; });
  CHECK(h_minus_half_norm_sq(plan, shifted, MeanPolicy::Remove) == doctest::Approx(removed).epsilon(1e-10));
}

TEST_CASE("duality between the periodic and free-space forms") {
  // For localized mean-zero f the three forms agree up to box truncation.
  std::mt19937_64 rng(21);
  const Grid2D g = make_grid(512, 80.0);
  SpectralPlan plan(g);
  for (int t = 0; t < 5; ++t) {
    const Field f = testing::mean_zero_packet_field(g, testing::random_packets(rng, 6, 3.0, 0.8, 1.6, 1.0));
    const double hm = h_minus_half_norm_sq(plan, f, MeanPolicy::Remove);
    const double cf = coulomb_form(plan, f);
    const double hh = h_half_norm_sq(plan, riesz_potential(plan, f));
    CHECK(cf == doctest::Approx(hm).epsilon(2e-3));
    CHECK(hh == doctest::Approx(cf).epsilon(2e-3));
  }
}

TEST_CASE("fractional Sobolev and Hardy inequalities on random fields") {
  const Grid2D g = make_grid(256, 32.0);
  SpectralPlan plan(g);
  std::mt19937_64 rng(17);
  for (int t = 0; t < 20; ++t) {
    const Field u = testing::packet_field(g, testing::random_packets(rng, 5, 4.0, 0.6, 2.0, 2.0));
    const double kin = h_half_norm_sq(plan, u);
    const double l4 = lp_norm(u, 4.0);
    CHECK(kin >= std::sqrt(pi) * l4 * l4);
    CHECK(4.3769 * kin >= inverse_radius_integral(u));
  }
}

TEST_CASE("lp_norm") {
  const Grid2D g = make_grid(64, 10.0);
  const Field two = Field::sample(g, [](double, double) { return 2.0; });
  CHECK(lp_norm(two, 1.0) == doctest::Approx(200.0));
  const Field gauss = Field::sample(g, [](double x, double y) { return std::exp(-x * x - y * y); });
  CHECK(lp_norm(gauss, 2.0) == doctest::Approx(std::sqrt(pi / 2)).epsilon(1e-6));
  const Field twice = Field::sample(g, [](double x, double y) { return 2 * std::exp(-x * x - y * y); });
  for (double p : {1.0, 4.0}) CHECK(lp_norm(twice, p) == doctest::Approx(2 * lp_norm(gauss, p)));
  CHECK_THROWS_AS(lp_norm(gauss, 0.5), Error);
}

TEST_CASE("origin cell weight") {
  // midpoint rule on a fine subgrid of the unit cell
  constexpr int m = 2000;
  double s = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) s += 1.0 / std::hypot((i + 0.5) / m - 0.5, (j + 0.5) / m - 0.5);
  s /= static_cast<double>(m) * m;
  CHECK(origin_cell_inverse_radius(1.0) == doctest::Approx(s).epsilon(1e-3));
  CHECK(origin_cell_inverse_radius(0.5) == doctest::Approx(2 * origin_cell_inverse_radius(1.0)));
}

TEST_CASE("plans are reusable and deterministic") {
  const Grid2D g = make_grid(64, 12.0);
  SpectralPlan plan(g);
  std::mt19937_64 rng(1);
  const Field f = testing::packet_field(g, testing::random_packets(rng, 3, 2.0, 0.8, 1.5, 1.0));
  const Field a = riesz_potential(plan, f);
  const Field b = riesz_potential(plan, f);
  CHECK(max_abs_diff(a, b) == 0.0);
  SpectralPlan other(g);
  CHECK(max_abs_diff(riesz_potential(other, f), a) == 0.0);
}

TEST_CASE("padded half-Laplacian sees the box edge") {
  const Grid2D g = make_grid(64, 16.0);
  SpectralPlan plan(g);
  // localized fields: the two forms agree up to image terms
  const Field bump = Field::sample(g, [](double x, double y) { return std::exp(-(x * x + y * y)); });
  CHECK(h_half_norm_sq_padded(plan, bump) == doctest::Approx(h_half_norm_sq(plan, bump)).epsilon(2e-3));
  // a constant costs nothing periodically but pays for its edge once extended by zero
  const Field one = Field::sample(g, [](double, double) { return 1.0; });
  CHECK(h_half_norm_sq(plan, one) == doctest::Approx(0.0));
  CHECK(h_half_norm_sq_padded(plan, one) > 16.0);
  // and the form stays symmetric
  std::mt19937_64 rng(2);
  const Field f = testing::packet_field(g, testing::random_packets(rng, 3, 3.0, 0.8, 1.5, 1.0));
  const Field w = testing::packet_field(g, testing::random_packets(rng, 3, 3.0, 0.8, 1.5, 1.0));
  const Field hf = half_laplacian_padded(plan, f), hw = half_laplacian_padded(plan, w);
  double a = 0.0, b = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    a += w[i] * hf[i];
    b += f[i] * hw[i];
  }
  CHECK(a == doctest::Approx(b).epsilon(1e-10));
}

#include "tfdw/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "tfdw/error.hpp"

namespace tfdw::specfun {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double eps = std::numeric_limits<double>::epsilon();

// Lanczos approximation, g = 7, n = 9.
constexpr double lanczos_g = 7.0;
constexpr std::array<double, 9> lanczos_c = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

double gamma_lanczos(double x) {
  // valid for x >= 0.5
  x -= 1.0;
  double acc = lanczos_c[0];
  for (std::size_t i = 1; i < lanczos_c.size(); ++i) acc += lanczos_c[i] / (x + static_cast<double>(i));
  const double t = x + lanczos_g + 0.5;
  // split the power to delay overflow
  const double p = std::pow(t, 0.5 * (x + 0.5));
  return std::sqrt(2.0 * pi) * p * (p * std::exp(-t)) * acc;
}

struct J0Y0Series {
  long double j0;
  long double y0_tail;  // (2/pi) sum_{k>=1} (-1)^{k+1} H_k q^k / (k!)^2
  long double max_term;
};

// Power series in q = z^2/4, evaluated in extended precision to absorb the
// cancellation between terms of size up to ~e^z / z.
J0Y0Series j0_y0_series(double z) {
  const long double q = 0.25L * static_cast<long double>(z) * z;
  long double term = 1.0L;  // q^k / (k!)^2
  long double harmonic = 0.0L;
  J0Y0Series s{1.0L, 0.0L, 1.0L};
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<long double>(k) * k);
    harmonic += 1.0L / k;
    const long double sign = (k % 2 == 0) ? 1.0L : -1.0L;
    s.j0 += sign * term;
    s.y0_tail -= sign * harmonic * term;
    if (term > s.max_term) s.max_term = term;
    if (term * harmonic < 1e-22L * (1.0L + std::fabs(s.j0))) break;
  }
  s.y0_tail *= 2.0L / std::numbers::pi_v<long double>;
  return s;
}

struct Hankel {
  double p, q, err;
};

// Asymptotic P_nu, Q_nu of the Hankel expansion (nu = 0 or 1), summed to the
// smallest term.
Hankel hankel_pq(double z, int nu = 0) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0, q = 0.0;
  double term = 1.0;  // a_k(nu) / z^k
  double last = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = term * (mu - odd * odd) / (8.0 * k * z);
    if (std::fabs(next) > std::fabs(term)) break;
    term = next;
    last = std::fabs(term);
    // a_k / z^k contributes to P (k even) or Q (k odd) with sign (-1)^{floor(k/2)}
    const double sgn = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) p += sgn * term;
    else q += sgn * term;
    if (last < 1e-17) break;
  }
  return {p, q, last};
}

// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on P_n.
struct GaussLegendre {
  std::array<double, 32> x{}, w{};
  GaussLegendre() {
    constexpr int n = 32;
    for (int i = 0; i < n; ++i) {
      double t = std::cos(pi * (i + 0.75) / (n + 0.5));
      double dp = 1.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (t * p1 - p0) / (t * t - 1.0);
        const double dt = p1 / dp;
        t -= dt;
        if (std::fabs(dt) < 1e-16) break;
      }
      x[static_cast<std::size_t>(i)] = t;
      w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
  }
};

const GaussLegendre& gauss_legendre() {
  static const GaussLegendre gl;
  return gl;
}

void require_finite(double x, const char* name) {
  if (std::isnan(x)) throw Error(ErrorCode::Domain, std::string(name) + ": NaN argument");
}

}  // namespace

SpecFunResult gamma_e(double x) {
  require_finite(x, "gamma");
  if (x <= 0.0 && x == std::floor(x))
    throw Error(ErrorCode::Pole, "gamma: pole at nonpositive integer " + std::to_string(x));
  if (x > 171.6) throw Error(ErrorCode::Overflow, "gamma: overflow for x > 171.6");
  if (x < 0.5) {
    const double s = std::sin(pi * x);
    const double g = pi / (s * gamma_lanczos(1.0 - x));
    return {g, 1e-14 * std::fabs(g) * (1.0 + std::fabs(x))};
  }
  const double g = gamma_lanczos(x);
  return {g, 2e-15 * std::fabs(g) * (1.0 + 0.1 * x)};
}

double gamma(double x) { return gamma_e(x).value; }

SpecFunResult bessel_j0_e(double z) {
  require_finite(z, "bessel_j0");
  z = std::fabs(z);
  if (z < series_crossover) {
    const auto s = j0_y0_series(z);
    return {static_cast<double>(s.j0), eps * static_cast<double>(s.max_term) * 1e-3 + eps};
  }
  const auto h = hankel_pq(z);
  const double chi = z - 0.25 * pi;
  const double amp = std::sqrt(2.0 / (pi * z));
  return {amp * (h.p * std::cos(chi) - h.q * std::sin(chi)), amp * (h.err + 4.0 * eps)};
}

double bessel_j0(double z) { return bessel_j0_e(z).value; }

double bessel_j1(double z) {
  require_finite(z, "bessel_j1");
  const double sgn = z < 0.0 ? -1.0 : 1.0;
  z = std::fabs(z);
  if (z < series_crossover) {
    // sum (-1)^k (z/2)^{2k+1} / (k! (k+1)!)
    const long double x = 0.5L * z, q = x * x;
    long double term = x, sum = x;
    for (int k = 1; k < 200; ++k) {
      term *= -q / (static_cast<long double>(k) * (k + 1));
      sum += term;
      if (std::fabs(term) < 1e-22L) break;
    }
    return sgn * static_cast<double>(sum);
  }
  const auto h = hankel_pq(z, 1);
  const double chi = z - 0.75 * pi;
  return sgn * std::sqrt(2.0 / (pi * z)) * (h.p * std::cos(chi) - h.q * std::sin(chi));
}

namespace {

// sum (-1)^k (x/2)^{2k} x / ((k!)^2 (2k+1))
double j0_integral_series(double x) {
  const long double q = 0.25L * static_cast<long double>(x) * x;
  long double term = 1.0L, sum = 1.0L;  // term = q^k/(k!)^2
  for (int k = 1; k < 300; ++k) {
    term *= -q / (static_cast<long double>(k) * k);
    const long double t = term / (2 * k + 1);
    sum += t;
    if (std::fabs(t) < 1e-24L) break;
  }
  return static_cast<double>(sum * x);
}

}  // namespace

double bessel_j0_integral(double x) {
  require_finite(x, "bessel_j0_integral");
  const double sgn = x < 0.0 ? -1.0 : 1.0;
  x = std::fabs(x);
  // Power series below 12 (cancellation stays below ~1e-15 in extended
  // precision), Gauss-Legendre panels from 12 to 40, and the asymptotic
  // tail above 40 where its smallest term is ~e^{-x}.
  constexpr double series_max = 12.0, asymptotic_min = 40.0;
  if (x < series_max) return sgn * j0_integral_series(x);
  if (x < asymptotic_min) {
    const auto& gl = gauss_legendre();
    const int panels = static_cast<int>(std::ceil((x - series_max) / 2.5));
    const double width = (x - series_max) / panels;
    double acc = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double mid = series_max + (p + 0.5) * width;
      for (std::size_t i = 0; i < gl.x.size(); ++i)
        acc += gl.w[i] * bessel_j0(mid + 0.5 * width * gl.x[i]);
    }
    return sgn * (j0_integral_series(series_max) + 0.5 * width * acc);
  }
  // int_x^inf J0 = -J1 + J0/x + J1/x^2 - 3 J0/x^3 - 9 J1/x^4 + 45 J0/x^5 + ...
  // from A_m = -J1 x^{-m} + (m+1) J0 x^{-m-1} - (m+1)^2 A_{m+2}, A_m = int_x^inf J0 t^{-m} dt.
  const double j0 = bessel_j0(x), j1 = bessel_j1(x);
  double tail = 0.0, coef = 1.0, prev = std::numeric_limits<double>::infinity();
  double xm = 1.0;  // x^{-m}
  for (int m = 0; m < 400; m += 2) {
    const double size = std::fabs(coef) * (std::fabs(j0) + std::fabs(j1)) * xm;
    if (size > prev) break;
    prev = size;
    tail += coef * (-j1 * xm + (m + 1) * j0 * xm / x);
    coef *= -static_cast<double>((m + 1) * (m + 1));
    xm /= x * x;
    if (size < 1e-18) break;
  }
  return sgn * (1.0 - tail);
}

SpecFunResult bessel_y0_e(double z) {
  require_finite(z, "bessel_y0");
  if (!(z > 0.0)) throw Error(ErrorCode::Domain, "bessel_y0: requires z > 0");
  if (z < series_crossover) {
    const auto s = j0_y0_series(z);
    const long double lead =
        (2.0L / std::numbers::pi_v<long double>)*(std::log(0.5L * z) + euler_gamma) * s.j0;
    const double v = static_cast<double>(lead + s.y0_tail);
    return {v, eps * (static_cast<double>(s.max_term) * 1e-3 + std::fabs(v) + 1.0)};
  }
  const auto h = hankel_pq(z);
  const double chi = z - 0.25 * pi;
  const double amp = std::sqrt(2.0 / (pi * z));
  return {amp * (h.p * std::sin(chi) + h.q * std::cos(chi)), amp * (h.err + 4.0 * eps)};
}

double bessel_y0(double z) { return bessel_y0_e(z).value; }

SpecFunResult struve_h0_e(double z) {
  require_finite(z, "struve_h0");
  if (z < 0.0) throw Error(ErrorCode::Domain, "struve_h0: requires z >= 0");
  if (z == 0.0) return {0.0, 0.0};
  if (z < series_crossover) {
    // H0 = sum_k (-1)^k (z/2)^{2k+1} / Gamma(k+3/2)^2
    const long double x = 0.5L * z;
    const long double q = x * x;
    const long double g = std::sqrt(std::numbers::pi_v<long double>) / 2.0L;  // Gamma(3/2)
    long double term = x / (g * g);
    long double sum = term, max_term = term;
    for (int k = 1; k < 200; ++k) {
      const long double kk = k + 0.5L;  // Gamma(k+3/2) = (k+1/2) Gamma(k+1/2)
      term *= -q / (kk * kk);
      sum += term;
      max_term = std::max(max_term, std::fabs(term));
      if (std::fabs(term) < 1e-22L * (1.0L + std::fabs(sum))) break;
    }
    const double v = static_cast<double>(sum);
    return {v, eps * (static_cast<double>(max_term) * 1e-3 + std::fabs(v))};
  }
  const auto y = bessel_y0_e(z);
  const double v = y.value + 2.0 / (pi * z) - struve_y0_remainder(z);
  return {v, y.est_error + 1e-14 / z};
}

double struve_y0_remainder(double z) {
  require_finite(z, "struve_y0_remainder");
  if (!(z > 0.0)) throw Error(ErrorCode::Domain, "struve_y0_remainder: requires z > 0");
  if (z < series_crossover) return 2.0 / (pi * z) - struve_h0(z) + bessel_y0(z);
  // H0 - Y0 = (2/pi) int_0^inf exp(-z t) / sqrt(1+t^2) dt, so with t = s/z
  // the remainder is (2/(pi z)) int_0^inf exp(-s) (1 - (1+(s/z)^2)^{-1/2}) ds,
  // evaluated by composite Simpson on s in [0, 60].
  constexpr int intervals = 12000;
  constexpr double smax = 60.0;
  const double hs = smax / intervals;
  auto f = [z](double s) {
    const double w = (s / z) * (s / z);
    // 1 - (1+w)^{-1/2} = w / (sqrt(1+w) (1 + sqrt(1+w)))
    const double r = std::sqrt(1.0 + w);
    return std::exp(-s) * w / (r * (1.0 + r));
  };
  double acc = f(0.0) + f(smax);
  for (int i = 1; i < intervals; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(i * hs);
  return 2.0 / (pi * z) * acc * hs / 3.0;
}

double struve_h0(double z) { return struve_h0_e(z).value; }

double bessel_i0_scaled(double z) {
  require_finite(z, "bessel_i0_scaled");
  if (z < 0.0) throw Error(ErrorCode::Domain, "bessel_i0_scaled: requires z >= 0");
  if (z < series_crossover) {
    const double q = 0.25 * z * z;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 200; ++k) {
      term *= q / (static_cast<double>(k) * k);
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return sum * std::exp(-z);
  }
  // exp(-z) I0(z) ~ (2 pi z)^{-1/2} sum_k ((2k-1)!!)^2 / (k! (8z)^k)
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = term * odd * odd / (8.0 * k * z);
    if (next > term || next < 1e-17 * sum) break;
    term = next;
    sum += term;
  }
  return sum / std::sqrt(2.0 * pi * z);
}

SpecFunResult bessel_i0_e(double z) {
  require_finite(z, "bessel_i0");
  if (z < 0.0) throw Error(ErrorCode::Domain, "bessel_i0: requires z >= 0");
  if (z > 700.0) throw Error(ErrorCode::Overflow, "bessel_i0: z > 700 overflows; use bessel_i0_scaled");
  const double v = bessel_i0_scaled(z) * std::exp(z);
  return {v, 4.0 * eps * v};
}

double bessel_i0(double z) { return bessel_i0_e(z).value; }

}  // namespace tfdw::specfun

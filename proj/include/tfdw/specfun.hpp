#pragma once

// Real special functions used by the closed-form expressions of the model.
// Each function has a plain form returning the value and an `_e` form that
// also reports a truncation-based error estimate (not a rigorous bound).

namespace tfdw::specfun {

struct SpecFunResult {
  double value = 0.0;
  double est_error = 0.0;  // absolute
};

/// Euler-Mascheroni constant.
inline constexpr double euler_gamma = 0.57721566490153286061;

/// Gamma function; throws Pole at nonpositive integers, Overflow past ~171.6.
SpecFunResult gamma_e(double x);
double gamma(double x);

/// Bessel J0, any real z.
SpecFunResult bessel_j0_e(double z);
double bessel_j0(double z);

/// Bessel J1, any real z.
double bessel_j1(double z);

/// int_0^x J0(t) dt, any real x (odd in x).
double bessel_j0_integral(double x);

/// Bessel Y0 for z > 0; throws Domain otherwise.
SpecFunResult bessel_y0_e(double z);
double bessel_y0(double z);

/// Struve H0 for z >= 0; throws Domain otherwise.
SpecFunResult struve_h0_e(double z);
double struve_h0(double z);

/// 2/(pi z) - (H0(z) - Y0(z)) for z > 0, without the large-z cancellation.
double struve_y0_remainder(double z);

/// Modified Bessel I0 for 0 <= z <= 700; throws Domain / Overflow.
SpecFunResult bessel_i0_e(double z);
double bessel_i0(double z);

/// exp(-z) I0(z) for z >= 0; never overflows.
double bessel_i0_scaled(double z);

/// Power series / asymptotic crossover used by J0, Y0, H0 and I0.
inline constexpr double series_crossover = 16.0;

}  // namespace tfdw::specfun

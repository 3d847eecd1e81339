#pragma once

#include <cmath>

// Pointwise nonlinearities of the energy written in u = sgn(rho) sqrt|rho| - ubar.
// All of them assume ubar >= 0 (negative backgrounds are reflected away at the
// API boundary).

namespace tfdw {

/// S(u) = |u+ubar|(u+ubar) - ubar^2, the charge density rho - rho_bar.
inline double s_of_u(double u, double ubar) noexcept {
  const double w = u + ubar;
  return std::abs(w) * w - ubar * ubar;
}

inline double s_prime(double u, double ubar) noexcept { return 2.0 * std::abs(u + ubar); }

/// Phi(u) = 2/3 (|u+ubar|^3 - ubar^3) - ubar S(u). Nonnegative, C^1.
inline double phi_of_u(double u, double ubar) noexcept {
  const double w = std::abs(u + ubar);
  return (2.0 / 3.0) * (w * w * w - ubar * ubar * ubar) - ubar * s_of_u(u, ubar);
}

/// Phi'(u) = u S'(u).
inline double phi_prime(double u, double ubar) noexcept { return u * s_prime(u, ubar); }

/// S reflected about u = -ubar: S(|u+ubar| - ubar) = 2 ubar u + u^2.
inline double s_plus(double u, double ubar) noexcept { return u * (u + 2.0 * ubar); }

/// Phi reflected about u = -ubar.
inline double phi_plus(double u, double ubar) noexcept {
  const double w = std::abs(u + ubar);
  return (2.0 / 3.0) * (w * w * w - ubar * ubar * ubar) - ubar * s_plus(u, ubar);
}

/// Projection onto the cone u >= -ubar by reflection.
inline double reflect(double u, double ubar) noexcept { return std::abs(u + ubar) - ubar; }

enum class Branch { Signed, Plus };

}  // namespace tfdw

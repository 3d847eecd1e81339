#pragma once

#include <utility>
#include <vector>

#include "tfdw/grid.hpp"
#include "tfdw/model.hpp"
#include "tfdw/operators.hpp"

namespace tfdw {

/// a_c = Gamma(1/4)^2 / (2 Gamma(3/4)^2), the inverse Hardy constant of (-Delta)^{1/2}.
double hardy_constant();

enum class Bifurcation { Trivial, Nontrivial };

/// For V = V0 and rho_bar = 0: Trivial iff a >= a_c.
Bifurcation classify_bifurcation(double a);

struct WitnessOptions {
  double core_radius = 1.0;                     // r0
  double cutoff_radius = 0.0;                   // R; 0 means L/4
  std::vector<double> dilations{1, 2, 4, 8, 16};  // lambda values tried in order
  double margin = 0.05;                         // required a_c - a
};

struct Witness {
  Field u;
  double t = 0.0;
  double lambda = 0.0;
  double energy = 0.0;     // E_+(t u)
  double quadratic = 0.0;  // a ||u||^2 + int V u^2
};

/// Builds u(x) = min(|x|/lambda, r0)^{-1/2} chi(|x|/R) with a smooth cutoff chi,
/// then scans t for E_+(t u) < 0. Throws InvalidArgument if a >= a_c - margin
/// and WitnessNotFound if no dilation works.
Witness negative_energy_witness(const ModelParams& params, const Field& v, SpectralPlan& plan,
                                const WitnessOptions& options = {});

/// Truncated |x|^{-1/2} profile used by the witness search.
Field witness_profile(const Grid2D& grid, double lambda, double core_radius, double cutoff_radius);

struct DecayPrediction {
  double s = 0.0;
  double rho_exponent = 0.0;  // 2s
  double lhs_residual = 0.0;
};

/// Left side of the decay-exponent equation, 2a G((s+1)/2) G((2-s)/2) / (G((1-s)/2) G(s/2)).
double decay_lhs(double a, double s);

/// Bisection for LHS(s) = 1 - b Q / (2 pi) on [1.001, 1.999].
/// Throws RhsNonnegative when no s in (1,2) can satisfy it, RootNotBracketed
/// when the root lies outside the bracket.
DecayPrediction solve_decay_exponent(double a, double b, double l1_charge);

struct TailFit {
  double exponent = 0.0;
  double prefactor = 0.0;
  double r_min = 0.0, r_max = 0.0;
  double r_squared = 0.0;
  std::size_t bins = 0;
};

/// Least-squares fit of ln(mean) against ln(r) over bins with r in [r_min, r_max].
TailFit fit_tail(const RadialProfile& profile, double r_min, double r_max);

/// Whole-plane charge estimate: the integral of f over |x| <= fit.r_max plus
/// the fitted tail A r^{-p} integrated over |x| > fit.r_max. Needs p > 2.
/// Informational only; l1_charge stays the box integral.
double extrapolated_charge(const Field& f, const TailFit& fit);

/// G_{a,c}(r) = c/(4a^2) (2a/(pi c r) - H0(cr/a) + Y0(cr/a)).
double green_function(double a, double c, double r);

/// (r, G) on count log-spaced radii in [r_min, r_max].
std::vector<std::pair<double, double>> green_table(double a, double c, double r_min, double r_max,
                                                   std::size_t count);

}  // namespace tfdw

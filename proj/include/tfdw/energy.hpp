#pragma once

#include <span>
#include <vector>

#include "tfdw/grid.hpp"
#include "tfdw/model.hpp"
#include "tfdw/nonlinearity.hpp"
#include "tfdw/operators.hpp"

namespace tfdw {

/// E(u) = a ||u||^2_{Hdot^{1/2}} + int Phi(u) + int V S(u) + (b/2) <S(u), riesz S(u)>
/// with riesz the convolution with 1/(2 pi |x|). The kinetic norm is that of
/// u extended by zero outside the box (h_half_norm_sq_padded), so the box
/// approximates the plane rather than a torus.
struct EnergyBreakdown {
  double kinetic = 0.0;
  double phi_term = 0.0;
  double potential_term = 0.0;
  double coulomb_term = 0.0;
  double total = 0.0;
};

EnergyBreakdown energy(const Field& u, const ModelParams& params, const Field& v, SpectralPlan& plan);

/// E_+: S and Phi reflected about u = -ubar.
EnergyBreakdown energy_plus(const Field& u, const ModelParams& params, const Field& v,
                            SpectralPlan& plan);

/// d/dt E(u + t h) at t = 0.
double directional_derivative(const Field& u, const Field& h, const ModelParams& params,
                              const Field& v, SpectralPlan& plan);

/// EL residual a (-Delta)^{1/2} u + |u+ubar| (u + V + b riesz S(u)); half the L2 gradient of E.
Field el_residual(const Field& u, const ModelParams& params, const Field& v, SpectralPlan& plan);

/// Quadratic part of T around a uniform density rho0:
/// (C_W/4)|rho0|^{-1} ||d||^2_{Hdot^{1/2}} + (C_TFD/4)|rho0|^{-1/2} ||d||^2_{L2}.
double second_variation_kinetic(SpectralPlan& plan, const Field& delta_rho, double rho0, double c_w,
                                double c_tfd);

/// T(rho) = C_W ||sgn(rho) sqrt|rho| ||^2_{Hdot^{1/2}} + (2/3) C_TFD int |rho|^{3/2} on the box.
double kinetic_functional(SpectralPlan& plan, const Field& rho, double c_w, double c_tfd);

/// E as a functional of a nonnegative density: E(sqrt(rho) - ubar).
double energy_of_density(const Field& rho, const ModelParams& params, const Field& v,
                         SpectralPlan& plan);

/// Whether E(t rho0 + (1-t) rho1) <= t E(rho0) + (1-t) E(rho1) + 1e-9 (1 + |rhs|).
bool energy_convexity_check(const Field& rho0, const Field& rho1, const ModelParams& params,
                            const Field& v, SpectralPlan& plan, double t);

/// Scratch buffers for repeated evaluation on one grid.
struct EnergyWorkspace {
  explicit EnergyWorkspace(std::size_t size);
  std::vector<double> half_lap;  // (-Delta)^{1/2} of the zero extension of u
  std::vector<double> charge;    // S(u)
  std::vector<double> coulomb;   // riesz S(u)
  std::vector<double> residual;
};

/// Evaluates the energy of `u` and, when requested, the EL residual into ws.residual.
EnergyBreakdown evaluate_energy(SpectralPlan& plan, std::span<const double> u,
                                const ModelParams& params, std::span<const double> v, Branch branch,
                                EnergyWorkspace& ws, bool with_residual);

}  // namespace tfdw

#include "tfdw/energy.hpp"

#include <cmath>

#include "tfdw/error.hpp"
#include "tfdw/kernels.hpp"

namespace tfdw {

EnergyWorkspace::EnergyWorkspace(std::size_t size)
    : half_lap(size), charge(size), coulomb(size), residual(size) {}

EnergyBreakdown evaluate_energy(SpectralPlan& plan, std::span<const double> u,
                                const ModelParams& params, std::span<const double> v, Branch branch,
                                EnergyWorkspace& ws, bool with_residual) {
  const Grid2D& g = plan.grid();
  const std::size_t block = g.n();
  const double h2 = g.cell_area();
  const double ubar = params.ubar();

  plan.half_laplacian_padded(u, ws.half_lap);
  kernels::charge_density(u, ubar, branch, ws.charge);
  plan.riesz(ws.charge, ws.coulomb);

  EnergyBreakdown e;
  e.kinetic = params.a * kernels::dot(u, ws.half_lap, block) * h2;
  const auto local = kernels::local_energy_sums(u, v, ubar, branch, block);
  e.phi_term = local.phi * h2;
  e.potential_term = local.potential * h2;
  e.coulomb_term = 0.5 * params.b * kernels::dot(ws.charge, ws.coulomb, block) * h2;
  e.total = e.kinetic + e.phi_term + e.potential_term + e.coulomb_term;

  if (with_residual)
    kernels::el_residual(ws.half_lap, u, v, ws.coulomb, params.a, params.b, ubar, ws.residual);
  return e;
}

namespace {

EnergyBreakdown energy_on_branch(const Field& u, const ModelParams& params, const Field& v,
                                 SpectralPlan& plan, Branch branch) {
  require_same_grid(plan.grid(), u);
  require_same_grid(plan.grid(), v);
  EnergyWorkspace ws(u.values().size());
  return evaluate_energy(plan, u.values(), params, v.values(), branch, ws, false);
}

}  // namespace

EnergyBreakdown energy(const Field& u, const ModelParams& params, const Field& v, SpectralPlan& plan) {
  return energy_on_branch(u, params, v, plan, Branch::Signed);
}

EnergyBreakdown energy_plus(const Field& u, const ModelParams& params, const Field& v,
                            SpectralPlan& plan) {
  return energy_on_branch(u, params, v, plan, Branch::Plus);
}

Field el_residual(const Field& u, const ModelParams& params, const Field& v, SpectralPlan& plan) {
  require_same_grid(plan.grid(), u);
  require_same_grid(plan.grid(), v);
  EnergyWorkspace ws(u.values().size());
  evaluate_energy(plan, u.values(), params, v.values(), Branch::Signed, ws, true);
  return Field(plan.grid(), std::move(ws.residual));
}

double directional_derivative(const Field& u, const Field& h, const ModelParams& params,
                              const Field& v, SpectralPlan& plan) {
  require_same_grid(plan.grid(), u);
  require_same_grid(plan.grid(), h);
  require_same_grid(plan.grid(), v);
  const Grid2D& g = plan.grid();
  const std::size_t size = g.size();
  const double ubar = params.ubar();
  EnergyWorkspace ws(size);
  plan.half_laplacian_padded(u.values(), ws.half_lap);
  kernels::charge_density(u.values(), ubar, Branch::Signed, ws.charge);
  plan.riesz(ws.charge, ws.coulomb);

  // 2a <u,h>_{Hdot^{1/2}} + int (Phi'(u) + V S'(u) + b U S'(u)) h
  std::vector<double> local(size);
  for (std::size_t i = 0; i < size; ++i) {
    const double sp = s_prime(u[i], ubar);
    local[i] = phi_prime(u[i], ubar) + v[i] * sp + params.b * ws.coulomb[i] * sp;
  }
  const double kin = 2.0 * params.a * kernels::dot(ws.half_lap, h.values(), g.n());
  return (kin + kernels::dot(local, h.values(), g.n())) * g.cell_area();
}

double second_variation_kinetic(SpectralPlan& plan, const Field& delta_rho, double rho0, double c_w,
                                double c_tfd) {
  require_same_grid(plan.grid(), delta_rho);
  if (rho0 == 0.0 || !std::isfinite(rho0))
    throw Error(ErrorCode::ZeroBackground, "second variation needs rho0 != 0");
  const double r = std::abs(rho0);
  const double hh = h_half_norm_sq(plan, delta_rho);
  const double l2 = kernels::sum_abs_pow(delta_rho.values(), 2.0, delta_rho.grid().n()) *
                    delta_rho.grid().cell_area();
  return 0.25 * c_w / r * hh + 0.25 * c_tfd / std::sqrt(r) * l2;
}

double kinetic_functional(SpectralPlan& plan, const Field& rho, double c_w, double c_tfd) {
  require_same_grid(plan.grid(), rho);
  std::vector<double> w(rho.values().begin(), rho.values().end());
  for (double& x : w) x = std::copysign(std::sqrt(std::abs(x)), x);
  const Field root(rho.grid(), std::move(w));
  return c_w * h_half_norm_sq(plan, root) + (2.0 / 3.0) * c_tfd * std::pow(lp_norm(rho, 1.5), 1.5);
}

double energy_of_density(const Field& rho, const ModelParams& params, const Field& v,
                         SpectralPlan& plan) {
  const double ubar = params.ubar();
  std::vector<double> u(rho.values().begin(), rho.values().end());
  for (double& x : u) {
    if (x < 0.0) throw Error(ErrorCode::NegativeDensity, "density must be nonnegative");
    x = std::sqrt(x) - ubar;
  }
  return energy(Field(rho.grid(), std::move(u)), params, v, plan).total;
}

bool energy_convexity_check(const Field& rho0, const Field& rho1, const ModelParams& params,
                            const Field& v, SpectralPlan& plan, double t) {
  if (!(t > 0.0 && t < 1.0)) throw Error(ErrorCode::InvalidArgument, "t must lie in (0,1)");
  require_same_grid(rho0.grid(), rho1);
  std::vector<double> mix(rho0.values().size());
  for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = t * rho0[i] + (1.0 - t) * rho1[i];
  const double e0 = energy_of_density(rho0, params, v, plan);
  const double e1 = energy_of_density(rho1, params, v, plan);
  const double em = energy_of_density(Field(rho0.grid(), std::move(mix)), params, v, plan);
  const double rhs = t * e0 + (1.0 - t) * e1;
  return em <= rhs + 1e-9 * (1.0 + std::abs(rhs));
}

}  // namespace tfdw

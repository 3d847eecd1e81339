#include "tfdw/solver.hpp"

#include <algorithm>
#include <cmath>

#include "tfdw/error.hpp"
#include "tfdw/kernels.hpp"

namespace tfdw {

std::string_view to_string(StopReason r) noexcept {
  switch (r) {
    case StopReason::Residual: return "residual";
    case StopReason::EnergyStall: return "energy-stall";
    case StopReason::StepUnderflow: return "step-underflow";
    case StopReason::MaxIterations: return "max-iterations";
  }
  return "unknown";
}

void validate(const SolveConfig& c) {
  auto positive = [](double x) { return x > 0.0 && std::isfinite(x); };
  if (!positive(c.step_size) || !positive(c.sigma) || !positive(c.residual_tol) ||
      !positive(c.energy_stall_tol) || !positive(c.tau_min) || !positive(c.tau_max) ||
      !(c.tau_growth >= 1.0) || c.max_iters < 1 || c.stall_window < 1)
    throw Error(ErrorCode::InvalidArgument, "solver settings must be positive");
  if (c.init == InitialGuess::Provided && !c.initial)
    throw Error(ErrorCode::InvalidArgument, "provided initial guess is missing");
}

Field initial_guess(const SolveConfig& config, const Field& v) {
  switch (config.init) {
    case InitialGuess::Zero: return Field(v.grid());
    case InitialGuess::Provided: require_same_grid(v.grid(), *config.initial); return *config.initial;
    case InitialGuess::ScaledPotential: break;
  }
  std::vector<double> u(v.values().size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = 0.5 * std::max(0.0, -v[i]);
  return Field(v.grid(), std::move(u));
}

SolveReport minimize(const ModelParams& params, const Field& v, SpectralPlan& plan,
                     const SolveConfig& config, double v_norm_sq) {
  validate(config);
  require_same_grid(plan.grid(), v);
  const Grid2D& g = plan.grid();
  const std::size_t size = g.size(), block = g.n();
  const double h2 = g.cell_area();
  const double ubar = params.ubar();

  if (v_norm_sq < 0.0) v_norm_sq = h_half_norm_sq(plan, v);
  const double floor = -1.01 * v_norm_sq / (2.0 * params.b) - 1e-9;

  std::vector<double> u = initial_guess(config, v).take_values();
  for (double& x : u) x = reflect(x, ubar);

  EnergyWorkspace ws(size), trial_ws(size);
  std::vector<double> dir(size), trial(size), next_dir(size);
  const bool bb = config.step_rule == StepRule::BarzilaiBorwein;
  bool have_dir = false;
  EnergyBreakdown e = evaluate_energy(plan, u, params, v.values(), Branch::Plus, ws, true);
  std::size_t evaluations = 1;

  SolveReport rep{.u = Field(g), .rho = Field(g)};
  if (config.record_history) rep.energy_history.push_back(e.total);

  auto residual_norm = [&](const EnergyWorkspace& w) {
    return std::sqrt(kernels::sum_abs_pow(w.residual, 2.0, block) * h2);
  };
  double res = residual_norm(ws);
  double tau = config.step_size;
  std::size_t stalled = 0, it = 0;
  StopReason reason = StopReason::MaxIterations;

  if (res <= config.residual_tol) reason = StopReason::Residual;
  else {
    for (it = 0; it < config.max_iters; ++it) {
      if (!have_dir) plan.precondition(ws.residual, dir, params.a, config.sigma);
      have_dir = false;
      EnergyBreakdown et;
      bool accepted = false;
      while (tau >= config.tau_min) {
        kernels::step_reflect(u, dir, tau, ubar, trial);
        et = evaluate_energy(plan, trial, params, v.values(), Branch::Plus, trial_ws, true);
        ++evaluations;
        if (et.total <= e.total) {
          accepted = true;
          break;
        }
        tau *= 0.5;
      }
      if (!accepted) {
        reason = StopReason::StepUnderflow;
        break;
      }
      if (et.total < floor)
        throw Error(ErrorCode::Diverged, "energy " + std::to_string(et.total) +
                                             " fell below the lower bound; refine the grid");
      const double de = e.total - et.total;
      if (bb) {
        // s = u_{k+1} - u_k, y = R_{k+1} - R_k, P^{-1} y = dir_{k+1} - dir_k
        plan.precondition(trial_ws.residual, next_dir, params.a, config.sigma);
        double sy = 0.0, ypy = 0.0;
        for (std::size_t i = 0; i < size; ++i) {
          const double y = trial_ws.residual[i] - ws.residual[i];
          sy += (trial[i] - u[i]) * y;
          ypy += y * (next_dir[i] - dir[i]);
        }
        tau = sy > 0.0 && ypy > 0.0 ? std::min(sy / ypy, config.tau_max) : std::min(tau * config.tau_growth, config.tau_max);
        dir.swap(next_dir);
        have_dir = true;
      } else {
        tau = std::min(tau * config.tau_growth, config.tau_max);
      }
      u.swap(trial);
      std::swap(ws, trial_ws);
      e = et;
      if (config.record_history) rep.energy_history.push_back(e.total);
      res = residual_norm(ws);
      stalled = de <= config.energy_stall_tol ? stalled + 1 : 0;
      if (res <= config.residual_tol) {
        reason = StopReason::Residual;
        ++it;
        break;
      }
      if (stalled >= config.stall_window) {
        reason = StopReason::EnergyStall;
        ++it;
        break;
      }
    }
  }

  std::vector<double> rho(size);
  for (std::size_t i = 0; i < size; ++i) rho[i] = (u[i] + ubar) * (u[i] + ubar);
  double charge = 0.0;
  {
    std::vector<double> s(size);
    kernels::charge_density(u, ubar, Branch::Plus, s);
    charge = kernels::sum(s, block) * h2;
  }
  rep.u = Field(g, std::move(u));
  rep.rho = Field(g, std::move(rho));
  rep.breakdown = e;
  rep.residual_l2 = res;
  rep.iterations = it;
  rep.energy_evaluations = evaluations;
  rep.l1_charge = charge;
  rep.stop_reason = reason;
  rep.converged = reason == StopReason::Residual;
  rep.final_step = tau;
  return rep;
}

std::vector<SolveReport> continuation_sweep(const std::vector<ModelParams>& params_list,
                                            const Field& v, SpectralPlan& plan,
                                            const SolveConfig& config, double v_norm_sq) {
  if (params_list.empty()) throw Error(ErrorCode::InvalidArgument, "sweep needs at least one entry");
  if (v_norm_sq < 0.0) v_norm_sq = h_half_norm_sq(plan, v);
  std::vector<SolveReport> out;
  SolveConfig cfg = config;
  for (const auto& p : params_list) {
    out.push_back(minimize(p, v, plan, cfg, v_norm_sq));
    const auto& last = out.back();
    // A warm start at exactly zero would be a fixed point when ubar = 0.
    const bool trivial = kernels::sum_abs_pow(last.u.values(), 1.0, last.u.grid().n()) == 0.0;
    if (last.converged && !trivial) {
      cfg.init = InitialGuess::Provided;
      cfg.initial = last.u;
    } else {
      cfg = config;
    }
  }
  return out;
}

}  // namespace tfdw

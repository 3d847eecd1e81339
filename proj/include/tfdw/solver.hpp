#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tfdw/energy.hpp"
#include "tfdw/grid.hpp"
#include "tfdw/model.hpp"
#include "tfdw/operators.hpp"

namespace tfdw {

enum class InitialGuess { Zero, ScaledPotential, Provided };

/// Trial step for the next iteration. Growth multiplies the last accepted tau
/// by tau_growth; BarzilaiBorwein uses <s,y>/<y,P^{-1}y> from the last two
/// iterates (s = u change, y = residual change). Both are capped at tau_max
/// and backtracked by halving, so the energy never increases.
enum class StepRule { Growth, BarzilaiBorwein };

struct SolveConfig {
  double step_size = 1.0;         // initial tau
  double sigma = 1.0;             // preconditioner shift
  std::size_t max_iters = 5000;
  double residual_tol = 1e-6;     // on the L2 norm of the EL residual
  double energy_stall_tol = 1e-12;
  std::size_t stall_window = 20;
  double tau_min = 1e-8;
  double tau_max = 100.0;
  double tau_growth = 1.5;        // after an accepted step (StepRule::Growth)
  StepRule step_rule = StepRule::BarzilaiBorwein;
  InitialGuess init = InitialGuess::ScaledPotential;
  std::optional<Field> initial;   // for InitialGuess::Provided
  bool record_history = true;
};

/// Throws InvalidArgument on nonpositive or inconsistent settings.
void validate(const SolveConfig& config);

enum class StopReason { Residual, EnergyStall, StepUnderflow, MaxIterations };

std::string_view to_string(StopReason r) noexcept;

struct SolveReport {
  Field u;
  Field rho;  // (u + ubar)^2
  EnergyBreakdown breakdown{};
  double residual_l2 = 0.0;
  std::size_t iterations = 0;
  std::size_t energy_evaluations = 0;
  double l1_charge = 0.0;  // int ((u+ubar)^2 - rho_bar)
  bool converged = false;
  StopReason stop_reason = StopReason::MaxIterations;
  double final_step = 0.0;
  std::vector<double> energy_history{};  // accepted iterates, starting with the initial guess
};

/// Starting field for the given config: zero, max(0, -V)/2 or the provided field.
Field initial_guess(const SolveConfig& config, const Field& v);

/// Preconditioned projected descent on E_+:
///   u <- |u - tau (a(-Delta)^{1/2} + sigma)^{-1} R(u) + ubar| - ubar,
/// halving tau whenever the energy would increase. Throws Diverged if the
/// energy drops below the analytic lower bound -||V||^2/(2b).
///
/// `v_norm_sq` is ||V||^2_{Hdot^{1/2}} for the divergence guard; pass a
/// negative value to compute it spectrally from V.
SolveReport minimize(const ModelParams& params, const Field& v, SpectralPlan& plan,
                     const SolveConfig& config, double v_norm_sq = -1.0);

/// Solves each entry in order, warm-starting from the previous solution.
std::vector<SolveReport> continuation_sweep(const std::vector<ModelParams>& params_list,
                                            const Field& v, SpectralPlan& plan,
                                            const SolveConfig& config, double v_norm_sq = -1.0);

}  // namespace tfdw

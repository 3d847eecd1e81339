#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "tfdw/grid.hpp"
#include "tfdw/nonlinearity.hpp"

namespace tfdw {

class SpectralPlan;

/// Dimensionless model coefficients. rho_bar is stored nonnegative; a
/// negative background is mapped through the charge-conjugation symmetry
/// (rho, rho_bar, V) -> (-rho, -rho_bar, -V) by make_params, which records
/// the flip so callers can negate V and map results back.
struct ModelParams {
  double a = 1.0;
  double b = 1.0;
  double rho_bar = 0.0;
  bool sign_flipped = false;

  double ubar() const noexcept;
};

/// Validates a >= 0, b > 0, finite rho_bar; normalizes rho_bar < 0.
ModelParams make_params(double a, double b, double rho_bar);

/// Returns -V when params.sign_flipped, V otherwise.
Field oriented_potential(const ModelParams& params, const Field& v);

struct PointCharge {
  double c = 1.0;
  std::array<double, 2> y{0.0, 0.0};
  double z = 0.0;
};

struct ChargeMeasure {
  std::vector<PointCharge> charges;
};

/// V0(x) = -(1+|x|^2)^{-1/2}.
Field potential_v0(const Grid2D& grid);

/// V(x) = -sum c_i ((1+z_i)^2 + |x-y_i|^2)^{-1/2}; throws EmptyMeasure.
Field potential_from_charges(const Grid2D& grid, const ChargeMeasure& mu);

/// Closed-form (-Delta)^{1/2} V = -sum c_i (1+z_i) ((1+z_i)^2 + |x-y_i|^2)^{-3/2}.
Field half_laplacian_of_v(const Grid2D& grid, const ChargeMeasure& mu);

/// integrate(V * (-Delta)^{1/2} V) from the closed forms.
double v_h_half_norm_sq(const Grid2D& grid, const ChargeMeasure& mu);

/// The measure behind V0: one unit charge at the origin in the plane.
ChargeMeasure unit_charge();

/// JSON: {"charges":[{"c":1.0,"y":[0,0],"z":0.0}]}
ChargeMeasure parse_charge_measure(const std::string& json_text);
ChargeMeasure read_charge_measure(const std::filesystem::path& path);

/// Physical inputs in CGS units. No default C_W is provided.
struct PhysicalSetup {
  double Z = 1.0;
  double d = 1.0;
  double eps_d = 1.0;
  double C_W = 0.0;
  double C_TFD = 0.0;
  double e = 4.80320471e-10;  // statC
};

struct Rescaling {
  double a, b;
  double kappa, lambda, gamma;
};

/// a = eps_d C_W / (Z e^2), b = Z e^4 / (eps_d^2 C_TFD^2), lambda = 1/d,
/// kappa = (eps_d C_TFD d / (e^2 Z))^2, gamma = eps_d^3 C_TFD^2 d / (e^2 Z)^3.
Rescaling rescale_physical(const PhysicalSetup& setup);

}  // namespace tfdw

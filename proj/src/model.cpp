#include "tfdw/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tfdw/error.hpp"
#include "tfdw/kernels.hpp"

namespace tfdw {

double ModelParams::ubar() const noexcept { return std::sqrt(rho_bar); }

ModelParams make_params(double a, double b, double rho_bar) {
  if (!(a >= 0.0) || !std::isfinite(a)) throw Error(ErrorCode::InvalidArgument, "a must be >= 0");
  if (!(b > 0.0) || !std::isfinite(b)) throw Error(ErrorCode::InvalidArgument, "b must be > 0");
  if (!std::isfinite(rho_bar)) throw Error(ErrorCode::InvalidArgument, "rho_bar must be finite");
  ModelParams p{a, b, std::abs(rho_bar), rho_bar < 0.0};
  return p;
}

Field oriented_potential(const ModelParams& params, const Field& v) {
  if (!params.sign_flipped) return v;
  std::vector<double> out(v.values().begin(), v.values().end());
  for (double& x : out) x = -x;
  return Field(v.grid(), std::move(out));
}

Field potential_v0(const Grid2D& grid) {
  return Field::sample(grid, [](double x, double y) { return -1.0 / std::sqrt(1.0 + x * x + y * y); });
}

namespace {

void require_charges(const ChargeMeasure& mu) {
  if (mu.charges.empty()) throw Error(ErrorCode::EmptyMeasure, "charge measure has no charges");
  for (const auto& q : mu.charges)
    if (!(q.z >= 0.0)) throw Error(ErrorCode::InvalidArgument, "charge height z must be >= 0");
}

}  // namespace

Field potential_from_charges(const Grid2D& grid, const ChargeMeasure& mu) {
  require_charges(mu);
  return Field::sample(grid, [&](double x, double y) {
    double v = 0.0;
    for (const auto& q : mu.charges) {
      const double dz = 1.0 + q.z, dx = x - q.y[0], dy = y - q.y[1];
      v -= q.c / std::sqrt(dz * dz + dx * dx + dy * dy);
    }
    return v;
  });
}

Field half_laplacian_of_v(const Grid2D& grid, const ChargeMeasure& mu) {
  require_charges(mu);
  return Field::sample(grid, [&](double x, double y) {
    double v = 0.0;
    for (const auto& q : mu.charges) {
      const double dz = 1.0 + q.z, dx = x - q.y[0], dy = y - q.y[1];
      const double r2 = dz * dz + dx * dx + dy * dy;
      v -= q.c * dz / (r2 * std::sqrt(r2));
    }
    return v;
  });
}

double v_h_half_norm_sq(const Grid2D& grid, const ChargeMeasure& mu) {
  const Field v = potential_from_charges(grid, mu);
  const Field hv = half_laplacian_of_v(grid, mu);
  return kernels::dot(v.values(), hv.values(), grid.n()) * grid.cell_area();
}

ChargeMeasure unit_charge() { return ChargeMeasure{{PointCharge{}}}; }

ChargeMeasure parse_charge_measure(const std::string& json_text) {
  ChargeMeasure mu;
  try {
    const auto j = nlohmann::json::parse(json_text);
    for (const auto& item : j.at("charges")) {
      PointCharge q;
      q.c = item.at("c").get<double>();
      const auto& y = item.at("y");
      if (!y.is_array() || y.size() != 2) throw Error(ErrorCode::Parse, "charge \"y\" must have two entries");
      q.y = {y[0].get<double>(), y[1].get<double>()};
      q.z = item.value("z", 0.0);
      mu.charges.push_back(q);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("charge measure: ") + e.what());
  }
  require_charges(mu);
  return mu;
}

ChargeMeasure read_charge_measure(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::Io, "cannot open charges file " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_charge_measure(ss.str());
}

Rescaling rescale_physical(const PhysicalSetup& s) {
  for (double v : {s.Z, s.d, s.C_W, s.C_TFD, s.e})
    if (!(v > 0.0) || !std::isfinite(v))
      throw Error(ErrorCode::InvalidArgument, "physical inputs must be positive");
  if (!(s.eps_d >= 1.0)) throw Error(ErrorCode::InvalidArgument, "eps_d must be >= 1");
  const double e2 = s.e * s.e;
  Rescaling r;
  r.a = s.eps_d * s.C_W / (s.Z * e2);
  r.b = s.Z * e2 * e2 / (s.eps_d * s.eps_d * s.C_TFD * s.C_TFD);
  r.lambda = 1.0 / s.d;
  const double k = s.eps_d * s.C_TFD * s.d / (e2 * s.Z);
  r.kappa = k * k;
  const double ez = e2 * s.Z;
  r.gamma = s.eps_d * s.eps_d * s.eps_d * s.C_TFD * s.C_TFD * s.d / (ez * ez * ez);
  return r;
}

}  // namespace tfdw

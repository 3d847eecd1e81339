#include "tfdw/report.hpp"

#include <fstream>

#include "tfdw/error.hpp"

namespace tfdw {

nlohmann::json to_json(const EnergyBreakdown& e) {
  return {{"kinetic", e.kinetic},
          {"phi_term", e.phi_term},
          {"potential_term", e.potential_term},
          {"coulomb_term", e.coulomb_term},
          {"total", e.total}};
}

nlohmann::json to_json(const DecayPrediction& d) {
  return {{"s", d.s}, {"rho_exponent", d.rho_exponent}, {"lhs_residual", d.lhs_residual}};
}

nlohmann::json to_json(const TailFit& t) {
  return {{"exponent", t.exponent},   {"prefactor", t.prefactor}, {"window", {t.r_min, t.r_max}},
          {"r_squared", t.r_squared}, {"bins", t.bins}};
}

nlohmann::json to_json(const SolveReport& r, const ModelParams& params) {
  const Grid2D& g = r.u.grid();
  return {{"grid", {{"n", g.n()}, {"L", g.box_length()}}},
          {"model",
           {{"a", params.a},
            {"b", params.b},
            {"rho_bar", params.sign_flipped ? -params.rho_bar : params.rho_bar},
            {"sign_flipped", params.sign_flipped}}},
          {"energy", to_json(r.breakdown)},
          {"residual_l2", r.residual_l2},
          {"iterations", r.iterations},
          {"energy_evaluations", r.energy_evaluations},
          {"l1_charge", params.sign_flipped ? -r.l1_charge : r.l1_charge},
          {"converged", r.converged},
          {"stop_reason", std::string(to_string(r.stop_reason))},
          {"final_step", r.final_step}};
}

void write_json(const nlohmann::json& j, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  os << j.dump(2) << '\n';
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::Io, "cannot open " + path.string());
  try {
    return nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
  }
}

}  // namespace tfdw

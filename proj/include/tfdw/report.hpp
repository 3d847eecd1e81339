#pragma once

#include <filesystem>

#include <json.hpp>

#include "tfdw/analysis.hpp"
#include "tfdw/energy.hpp"
#include "tfdw/solver.hpp"

namespace tfdw {

nlohmann::json to_json(const EnergyBreakdown& e);
nlohmann::json to_json(const DecayPrediction& d);
nlohmann::json to_json(const TailFit& t);

/// Scalars of a solve; fields are referenced by file name, not embedded.
nlohmann::json to_json(const SolveReport& r, const ModelParams& params);

void write_json(const nlohmann::json& j, const std::filesystem::path& path);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace tfdw

#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "aoi/mean_field.hpp"
#include "aoi/single_zone.hpp"

namespace aoi {

enum class ExperimentKind {
  kSingleZone,
  kSteadyState,
  kGapSweep,
  kMeanField,
  kPopulation,
  kNashSweep,
  kSimulate,
  kOracle,
};

std::string to_string(ExperimentKind kind);
std::optional<ExperimentKind> kind_from_string(const std::string& name);

// A validated, normalized experiment description. parse() checks every field
// (collecting all violations into one ValidationError) and fills defaults, so
// load -> serialize -> load is the identity on the normalized form.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kSingleZone;
  nlohmann::json payload;  // normalized payload, without the "experiment" tag

  static ExperimentConfig load(const std::filesystem::path& path);
  static ExperimentConfig parse(const nlohmann::json& j);

  nlohmann::json to_json() const;
};

// Typed builders over already-validated payload fragments.
ZoneParams scenario_from_json(const nlohmann::json& scenario);
MultiZoneScenario multizone_from_json(const nlohmann::json& payload);
PopulationDistribution population_from_json(const nlohmann::json& population);

}  // namespace aoi

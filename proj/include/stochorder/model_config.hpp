#pragma once

#include <array>
#include <string>
#include <vector>

#include "stochorder/heat_sim.hpp"

namespace stochorder {

// Everything the district-heating model needs, with units in the field names
// of the YAML schema (see config/defaults.yaml).
struct ModelConfig {
  heat::Demand base_demand{1600.0, 2400.0};
  std::array<heat::Scenario, 3> scenarios;  // indexed by heat::ScenarioId
  heat::LevelTable levels;
  heat::TechnologyParams tech;

  const heat::Scenario& scenario(heat::ScenarioId id) const { return scenarios[heat::index(id)]; }

  static ModelConfig defaults();
};

// Loads a YAML config on top of the built-in defaults. Every key in the file
// must exist in the schema. Overrides are "dotted.path=value" strings applied
// after the file, with value parsed as YAML. Throws ConfigError.
ModelConfig load_model_config(const std::string& path, const std::vector<std::string>& overrides = {});
ModelConfig apply_config_text(const std::string& yaml_text, const std::vector<std::string>& overrides = {});

// Deterministic YAML rendering of a resolved config, round-trippable through
// apply_config_text.
std::string canonical_yaml(const ModelConfig& cfg);

// FNV-1a 64 of canonical text, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& text);

}  // namespace stochorder

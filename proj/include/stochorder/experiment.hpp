#pragma once

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "stochorder/dispersion.hpp"
#include "stochorder/heat_sim.hpp"
#include "stochorder/model_config.hpp"
#include "stochorder/sample.hpp"

namespace stochorder {

// One uncertain input and the levels it takes in the sweep.
struct FactorSpec {
  std::string name;
  std::vector<heat::Level> levels;
};

// Factor names understood by to_input_levels.
inline constexpr std::string_view kFactorOperationalCost = "operational_cost";
inline constexpr std::string_view kFactorDiscountRate = "discount_rate";
inline constexpr std::string_view kFactorCop = "cop";
inline constexpr std::string_view kFactorEmissionFactor = "emission_factor";

// combos[c][f] is the level of factors[f] in combination c. Combinations are
// lexicographic with the last factor varying fastest, so combo 0 takes the
// first level of every factor.
struct FactorialDesign {
  std::vector<std::string> factors;
  std::vector<std::vector<heat::Level>> combos;
};

FactorialDesign enumerate_factorial(const std::vector<FactorSpec>& factors);

// operational_cost, discount_rate, cop, emission_factor, each LOW/MED/HIGH.
std::vector<FactorSpec> default_factors();

// Factors absent from the design stay at MED.
heat::InputLevels to_input_levels(const FactorialDesign& design, std::size_t combo);

struct DatasetRow {
  heat::ScenarioId scenario;
  heat::Design design;
  int combo_id = 0;
  double npc_mln_eur = 0.0;
  double emissions_mton = 0.0;
};

struct DatasetMetadata {
  std::string config_hash;
  std::string timestamp;
  int num_combos = 0;
  std::vector<heat::ScenarioId> scenarios;
  std::vector<heat::Design> designs;
};

struct ExperimentDataset {
  std::vector<DatasetRow> rows;  // sorted by (scenario, design, combo_id)
  DatasetMetadata metadata;
};

// Simulates every (scenario, design, combo) cell. Row order is fixed by the
// order of `scenarios` and `designs` and does not depend on scheduling.
ExperimentDataset run_experiment(const std::vector<heat::Design>& designs,
                                 const std::vector<heat::ScenarioId>& scenarios, const FactorialDesign& factorial,
                                 const ModelConfig& config);

enum class GroupBy { DesignWithinScenario, ScenarioWithinDesign };
enum class OutputKind { Npc, Emissions, Both };

std::string_view to_string(GroupBy g);
std::string_view to_string(OutputKind o);

struct GroupMember {
  std::string label;
  // Sample for Npc/Emissions; two-column (npc, emissions) MultiSample in
  // combo_id order for Both.
  std::variant<Sample, MultiSample> data;
};

struct GroupContext {
  std::string context;
  std::vector<GroupMember> members;
};

struct Grouping {
  GroupBy by;
  OutputKind output;
  std::vector<GroupContext> contexts;
};

Grouping group_outputs(const ExperimentDataset& ds, GroupBy by, OutputKind output);

// CSV with header scenario,design,combo_id,npc_mln_eur,emissions_mton plus a
// sidecar "<path>.meta.json" holding DatasetMetadata.
void write_dataset(const ExperimentDataset& ds, const std::string& csv_path);
ExperimentDataset read_dataset(const std::string& csv_path);
std::string dataset_csv(const ExperimentDataset& ds);
std::string metadata_path(const std::string& csv_path);

// FNV-1a hash of the canonical YAML rendering of `config`.
std::string config_hash(const ModelConfig& config);

}  // namespace stochorder

#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stochorder::heat {

inline constexpr int kHorizonYears = 20;

// D1: CHP serves baseload and seasonal demand.
// D2: heat pump serves baseload, CHP serves seasonal demand.
// D3: heat pump with storage serves all demand.
enum class Design { D1, D2, D3 };
inline constexpr std::array<Design, 3> kAllDesigns{Design::D1, Design::D2, Design::D3};

enum class ScenarioId { Green, Neutral, Market };
inline constexpr std::array<ScenarioId, 3> kAllScenarios{ScenarioId::Green, ScenarioId::Neutral, ScenarioId::Market};

enum class Level { Low, Med, High };
inline constexpr std::array<Level, 3> kAllLevels{Level::Low, Level::Med, Level::High};

std::string_view to_string(Design d);
std::string_view to_string(ScenarioId s);
std::string_view to_string(Level l);
Design parse_design(std::string_view s);
ScenarioId parse_scenario(std::string_view s);
Level parse_level(std::string_view s);

inline std::size_t index(Design d) { return static_cast<std::size_t>(d); }
inline std::size_t index(ScenarioId s) { return static_cast<std::size_t>(s); }
inline std::size_t index(Level l) { return static_cast<std::size_t>(l); }

struct Scenario {
  ScenarioId id = ScenarioId::Neutral;
  double carbon_penalty = 0.0;  // EUR per Mton
  double demand_growth = 0.0;   // fraction per year
  std::vector<double> elec_price;  // EUR/MWh, one per year
  std::vector<double> gas_price;   // EUR/MWh, one per year
};

// Emission activity factors, Mton CO2-eq per MWh of the technology's input.
struct EmissionFactors {
  double chp_co2 = 0.0;
  double chp_nox = 0.0;
  double hp_co2 = 0.0;
  double gas_import_co2 = 0.0;
};

// Concrete values for one factorial run.
struct InputValues {
  std::vector<double> operational_cost;  // mln EUR per MW per year, one per year
  double discount_rate = 0.05;
  double cop_heat_pump = 3.6;
  double chp_heat_efficiency = 0.51;
  double chp_elec_efficiency = 0.30;
  EmissionFactors emission_factors;
};

// The three levels (LOW, MED, HIGH) of each of the four uncertain inputs.
// The COP level also selects the CHP heat and electricity efficiencies.
struct LevelTable {
  std::array<std::vector<double>, 3> operational_cost;
  std::array<double, 3> discount_rate{};
  std::array<double, 3> cop_heat_pump{};
  std::array<double, 3> chp_heat_efficiency{};
  std::array<double, 3> chp_elec_efficiency{};
  std::array<EmissionFactors, 3> emission_factors{};
};

// One level per input, in factor order.
struct InputLevels {
  Level operational_cost = Level::Med;
  Level discount_rate = Level::Med;
  Level cop = Level::Med;
  Level emission_factor = Level::Med;
};

InputValues resolve(const LevelTable& table, const InputLevels& levels);

enum class ChpCostAllocation {
  // Full CHP fuel bill charged to heat.
  Full,
  // Heat's energy share eta_h / (eta_h + eta_el) of the fuel bill.
  EnergyShare,
};

struct Capacity {
  double chp_mw = 0.0;
  double hp_mw = 0.0;
};

struct TechnologyParams {
  std::array<double, 3> capital_cost_mln{1.5, 2.5, 3.0};  // per design
  std::array<Capacity, 3> capacity{Capacity{1.0, 0.0}, Capacity{0.8, 0.2}, Capacity{0.0, 1.0}};
  double nox_co2e_weight = 1.0;
  ChpCostAllocation chp_cost_allocation = ChpCostAllocation::EnergyShare;
};

struct Demand {
  double baseload = 0.0;  // MWh per year
  double seasonal = 0.0;  // MWh per year
  double total() const { return baseload + seasonal; }
};

struct Allocation {
  double chp_heat = 0.0;  // MWh
  double hp_heat = 0.0;   // MWh
};

struct YearResult {
  int year = 0;
  double cost_eur = 0.0;
  double discounted_cost_eur = 0.0;
  double emissions_mton = 0.0;
};

struct SimulationResult {
  double npc_mln_eur = 0.0;
  double emissions_mton = 0.0;
  std::vector<YearResult> per_year;
};

Demand annual_demand(int year, const Scenario& scenario, const Demand& base);

Allocation dispatch(Design design, const Demand& demand);

// Mton CO2-eq for one year of operation.
double annual_emissions(const Allocation& alloc, const InputValues& in, const TechnologyParams& tech);

// Undiscounted EUR for one year, including capital in year 0.
double annual_cost(Design design, const Allocation& alloc, int year, const Scenario& scenario, const InputValues& in,
                   const TechnologyParams& tech);

// sum_y costs[y] / (1 + r)^y, returned in mln EUR.
double npc(std::span<const double> costs_eur, double discount_rate);

SimulationResult simulate(Design design, const Scenario& scenario, const InputValues& in,
                          const TechnologyParams& tech, const Demand& base_demand);

}  // namespace stochorder::heat

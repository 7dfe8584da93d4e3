#include "stochorder/heat_sim.hpp"

#include <cmath>
#include <string>

#include "stochorder/errors.hpp"

namespace stochorder::heat {

std::string_view to_string(Design d) {
  switch (d) {
    case Design::D1:
      return "d1";
    case Design::D2:
      return "d2";
    case Design::D3:
      return "d3";
  }
  return "?";
}

std::string_view to_string(ScenarioId s) {
  switch (s) {
    case ScenarioId::Green:
      return "green";
    case ScenarioId::Neutral:
      return "neutral";
    case ScenarioId::Market:
      return "market";
  }
  return "?";
}

std::string_view to_string(Level l) {
  switch (l) {
    case Level::Low:
      return "low";
    case Level::Med:
      return "med";
    case Level::High:
      return "high";
  }
  return "?";
}

Design parse_design(std::string_view s) {
  for (Design d : kAllDesigns) {
    if (s == to_string(d)) return d;
  }
  if (s == "1") return Design::D1;
  if (s == "2") return Design::D2;
  if (s == "3") return Design::D3;
  throw InvalidInput("unknown design '" + std::string(s) + "'");
}

ScenarioId parse_scenario(std::string_view s) {
  for (ScenarioId id : kAllScenarios) {
    if (s == to_string(id)) return id;
  }
  throw InvalidInput("unknown scenario '" + std::string(s) + "'");
}

Level parse_level(std::string_view s) {
  for (Level l : kAllLevels) {
    if (s == to_string(l)) return l;
  }
  throw InvalidInput("unknown level '" + std::string(s) + "'");
}

InputValues resolve(const LevelTable& table, const InputLevels& levels) {
  InputValues in;
  in.operational_cost = table.operational_cost[index(levels.operational_cost)];
  in.discount_rate = table.discount_rate[index(levels.discount_rate)];
  in.cop_heat_pump = table.cop_heat_pump[index(levels.cop)];
  in.chp_heat_efficiency = table.chp_heat_efficiency[index(levels.cop)];
  in.chp_elec_efficiency = table.chp_elec_efficiency[index(levels.cop)];
  in.emission_factors = table.emission_factors[index(levels.emission_factor)];
  return in;
}

Demand annual_demand(int year, const Scenario& scenario, const Demand& base) {
  if (year < 0 || year >= kHorizonYears) throw InvalidInput("year out of range");
  if (base.baseload < 0.0 || base.seasonal < 0.0) throw InvalidInput("negative base demand");
  const double growth = std::pow(1.0 + scenario.demand_growth, year);
  return {base.baseload * growth, base.seasonal * growth};
}

Allocation dispatch(Design design, const Demand& demand) {
  if (demand.baseload < 0.0 || demand.seasonal < 0.0) throw InvalidInput("negative demand");
  switch (design) {
    case Design::D1:
      return {demand.baseload + demand.seasonal, 0.0};
    case Design::D2:
      return {demand.seasonal, demand.baseload};
    case Design::D3:
      return {0.0, demand.baseload + demand.seasonal};
  }
  return {};
}

double annual_emissions(const Allocation& alloc, const InputValues& in, const TechnologyParams& tech) {
  const EmissionFactors& ef = in.emission_factors;
  const double chp_fuel = alloc.chp_heat / in.chp_heat_efficiency;
  const double hp_elec = alloc.hp_heat / in.cop_heat_pump;
  // All CHP fuel is imported gas.
  return chp_fuel * (ef.chp_co2 + tech.nox_co2e_weight * ef.chp_nox) + chp_fuel * ef.gas_import_co2 +
         hp_elec * ef.hp_co2;
}

double annual_cost(Design design, const Allocation& alloc, int year, const Scenario& scenario, const InputValues& in,
                   const TechnologyParams& tech) {
  const auto y = static_cast<std::size_t>(year);
  if (year < 0 || y >= scenario.gas_price.size() || y >= scenario.elec_price.size() ||
      y >= in.operational_cost.size())
    throw InvalidInput("year out of range");

  const double chp_fuel_billed = tech.chp_cost_allocation == ChpCostAllocation::Full
                                     ? alloc.chp_heat / in.chp_heat_efficiency
                                     : alloc.chp_heat / (in.chp_heat_efficiency + in.chp_elec_efficiency);
  const double fuel = chp_fuel_billed * scenario.gas_price[y];
  const double electricity = alloc.hp_heat / in.cop_heat_pump * scenario.elec_price[y];

  const Capacity& cap = tech.capacity[index(design)];
  const double fixed_om = in.operational_cost[y] * 1e6 * (cap.chp_mw + cap.hp_mw);

  const double penalty = scenario.carbon_penalty * annual_emissions(alloc, in, tech);
  const double capital = year == 0 ? tech.capital_cost_mln[index(design)] * 1e6 : 0.0;
  return fuel + electricity + fixed_om + penalty + capital;
}

double npc(std::span<const double> costs_eur, double discount_rate) {
  if (discount_rate < 0.0) throw InvalidInput("negative discount rate");
  double total = 0.0;
  double factor = 1.0;
  for (double c : costs_eur) {
    total += c / factor;
    factor *= 1.0 + discount_rate;
  }
  return total / 1e6;
}

SimulationResult simulate(Design design, const Scenario& scenario, const InputValues& in,
                          const TechnologyParams& tech, const Demand& base_demand) {
  if (!(in.cop_heat_pump > 1.0)) throw InvalidInput("heat pump COP must exceed 1");
  if (!(in.chp_heat_efficiency > 0.0 && in.chp_heat_efficiency <= 1.0))
    throw InvalidInput("CHP heat efficiency must lie in (0, 1]");

  SimulationResult result;
  result.per_year.reserve(kHorizonYears);
  std::vector<double> costs;
  costs.reserve(kHorizonYears);
  double factor = 1.0;
  for (int year = 0; year < kHorizonYears; ++year) {
    const Allocation alloc = dispatch(design, annual_demand(year, scenario, base_demand));
    const double cost = annual_cost(design, alloc, year, scenario, in, tech);
    const double emissions = annual_emissions(alloc, in, tech);
    costs.push_back(cost);
    result.per_year.push_back({year, cost, cost / factor, emissions});
    result.emissions_mton += emissions;
    factor *= 1.0 + in.discount_rate;
  }
  result.npc_mln_eur = npc(costs, in.discount_rate);
  return result;
}

}  // namespace stochorder::heat

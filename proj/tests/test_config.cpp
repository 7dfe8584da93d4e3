#include <doctest.h>

#include <fstream>
#include <string>

#include "stochorder/errors.hpp"
#include "stochorder/model_config.hpp"

using namespace stochorder;
using heat::ScenarioId;

namespace {

const std::string kDefaultsPath = std::string(STOCHORDER_SOURCE_DIR) + "/config/defaults.yaml";

}  // namespace

TEST_CASE("checked-in defaults file equals the built-in defaults") {
  const auto file = load_model_config(kDefaultsPath);
  CHECK(canonical_yaml(file) == canonical_yaml(ModelConfig::defaults()));
}

TEST_CASE("default values") {
  const auto c = ModelConfig::defaults();
  CHECK(c.scenario(ScenarioId::Green).carbon_penalty == 100);
  CHECK(c.scenario(ScenarioId::Neutral).carbon_penalty == 40);
  CHECK(c.scenario(ScenarioId::Market).carbon_penalty == 0);
  CHECK(c.scenario(ScenarioId::Green).demand_growth == -0.01);
  CHECK(c.scenario(ScenarioId::Neutral).demand_growth == 0.0);
  CHECK(c.scenario(ScenarioId::Market).demand_growth == 0.01);
  CHECK(c.levels.discount_rate == std::array<double, 3>{0.02, 0.05, 0.08});
  CHECK(c.levels.cop_heat_pump == std::array<double, 3>{3.0, 3.6, 5.0});
  CHECK(c.levels.chp_heat_efficiency[1] == 0.51);
  CHECK(c.levels.emission_factors[1].chp_co2 == 0.5100);
  CHECK(c.levels.emission_factors[1].hp_co2 == 0.5070);
  CHECK(c.levels.emission_factors[1].gas_import_co2 == 0.0503);
  for (const auto& s : c.scenarios) {
    CHECK(s.elec_price.size() == 20);
    CHECK(s.gas_price.size() == 20);
    for (double p : s.elec_price) CHECK(p > 0);
    for (double p : s.gas_price) CHECK(p > 0);
  }
  for (const auto& oc : c.levels.operational_cost) CHECK(oc.size() == 20);
  CHECK(c.levels.operational_cost[1].front() == 0.0360);
  CHECK(c.levels.operational_cost[2].back() == 0.0478);
  CHECK(c.levels.operational_cost[0].back() == 0.0270);
}

TEST_CASE("canonical yaml round-trips") {
  auto c = ModelConfig::defaults();
  c.scenarios[0].carbon_penalty = 123.456789;
  c.tech.chp_cost_allocation = heat::ChpCostAllocation::Full;
  const auto text = canonical_yaml(c);
  CHECK(canonical_yaml(apply_config_text(text)) == text);
  CHECK(fnv1a_hex(text) != fnv1a_hex(canonical_yaml(ModelConfig::defaults())));
}

TEST_CASE("partial file keeps other defaults") {
  const auto c = apply_config_text("scenarios:\n  green:\n    carbon_penalty_eur_per_mton: 80\n");
  CHECK(c.scenario(ScenarioId::Green).carbon_penalty == 80);
  CHECK(c.scenario(ScenarioId::Green).demand_growth == -0.01);
  CHECK(c.scenario(ScenarioId::Neutral).carbon_penalty == 40);
}

TEST_CASE("unknown key reports its path and line") {
  try {
    apply_config_text("demand:\n  baseload_mwh: 10\n  weekly_mwh: 3\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "demand.weekly_mwh");
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("weekly_mwh") != std::string::npos);
  }
}

TEST_CASE("ill-typed and out-of-range values") {
  CHECK_THROWS_AS(apply_config_text("levels:\n  discount_rate: {low: abc}\n"), ConfigError);
  CHECK_THROWS_AS(apply_config_text("levels:\n  cop_heat_pump: {low: 0.9}\n"), ConfigError);
  CHECK_THROWS_AS(apply_config_text("levels:\n  chp_heat_efficiency: {med: 1.5}\n"), ConfigError);
  CHECK_THROWS_AS(apply_config_text("scenarios:\n  green:\n    gas_price_eur_per_mwh: [1, 2]\n"), ConfigError);
  CHECK_THROWS_AS(apply_config_text("scenarios:\n  green:\n    carbon_penalty_eur_per_mton: -5\n"), ConfigError);
  CHECK_THROWS_AS(apply_config_text("technology:\n  chp_cost_allocation: half\n"), ConfigError);
  CHECK_THROWS_AS(apply_config_text("levels:\n  discount_rate: {lowest: 0.1}\n"), ConfigError);
  CHECK_THROWS_AS(apply_config_text("demand: [1, 2]\n"), ConfigError);
  CHECK_THROWS_AS(apply_config_text("demand: {baseload_mwh: 1\n"), ConfigError);
}

TEST_CASE("dotted overrides") {
  const auto c = apply_config_text("", {"scenarios.market.carbon_penalty_eur_per_mton=25", "technology.nox_co2e_weight=0.5",
                                        "levels.discount_rate.high=0.1"});
  CHECK(c.scenario(ScenarioId::Market).carbon_penalty == 25);
  CHECK(c.tech.nox_co2e_weight == 0.5);
  CHECK(c.levels.discount_rate[2] == 0.1);

  const auto f = apply_config_text("technology:\n  nox_co2e_weight: 2\n", {"technology.nox_co2e_weight=3"});
  CHECK(f.tech.nox_co2e_weight == 3);

  CHECK_THROWS_AS(apply_config_text("", {"scenarios.market.carbon=1"}), ConfigError);
  CHECK_THROWS_AS(apply_config_text("", {"novalue"}), ConfigError);
  CHECK_THROWS_AS(apply_config_text("", {"technology.nox_co2e_weight.x=1"}), ConfigError);
}

TEST_CASE("missing file is an I/O error") {
  CHECK_THROWS_AS(load_model_config("/nonexistent/defaults.yaml"), IoError);
}

TEST_CASE("fnv1a reference values") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

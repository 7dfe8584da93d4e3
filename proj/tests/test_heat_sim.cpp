#include <doctest.h>

#include <cmath>
#include <vector>

#include "stochorder/errors.hpp"
#include "stochorder/heat_sim.hpp"
#include "stochorder/model_config.hpp"

using namespace stochorder;
using namespace stochorder::heat;

namespace {

const ModelConfig& cfg() {
  static const ModelConfig c = ModelConfig::defaults();
  return c;
}

InputValues med() { return resolve(cfg().levels, InputLevels{}); }

SimulationResult run(Design d, ScenarioId s, const InputValues& in, const TechnologyParams& tech = cfg().tech) {
  return simulate(d, cfg().scenario(s), in, tech, cfg().base_demand);
}

}  // namespace

TEST_SUITE("demand and dispatch") {
  TEST_CASE("annual demand growth") {
    const Demand base{1000, 2000};
    const auto y0 = annual_demand(0, cfg().scenario(ScenarioId::Green), base);
    CHECK(y0.baseload == 1000);
    CHECK(y0.seasonal == 2000);
    const auto m1 = annual_demand(1, cfg().scenario(ScenarioId::Market), base);
    CHECK(m1.baseload == doctest::Approx(1010));
    CHECK(m1.seasonal == doctest::Approx(2020));
    CHECK_THROWS_WITH_AS(annual_demand(20, cfg().scenario(ScenarioId::Green), base), "year out of range",
                         InvalidInput);
    CHECK_THROWS_AS(annual_demand(-1, cfg().scenario(ScenarioId::Green), base), InvalidInput);
  }

  TEST_CASE("dispatch rules") {
    const Demand d{100, 200};
    CHECK(dispatch(Design::D1, d).chp_heat == 300);
    CHECK(dispatch(Design::D1, d).hp_heat == 0);
    CHECK(dispatch(Design::D2, d).chp_heat == 200);
    CHECK(dispatch(Design::D2, d).hp_heat == 100);
    CHECK(dispatch(Design::D3, d).chp_heat == 0);
    CHECK(dispatch(Design::D3, d).hp_heat == 300);
    CHECK_THROWS_WITH_AS(dispatch(Design::D1, Demand{-1, 0}), "negative demand", InvalidInput);
  }

  TEST_CASE("dispatch conserves demand exactly") {
    for (double b : {0.0, 1.5, 1600.0, 1234.567})
      for (double s : {0.0, 2.25, 2400.0, 98.7654})
        for (Design d : kAllDesigns) {
          const auto a = dispatch(d, Demand{b, s});
          CHECK(a.chp_heat + a.hp_heat == b + s);
        }
  }
}

TEST_SUITE("costs and emissions") {
  TEST_CASE("zero allocation and zero O&M after year 0 cost nothing") {
    InputValues in = med();
    in.operational_cost.assign(kHorizonYears, 0.0);
    CHECK(annual_cost(Design::D2, Allocation{}, 3, cfg().scenario(ScenarioId::Green), in, cfg().tech) == 0.0);
  }

  TEST_CASE("fuel cost under full allocation") {
    InputValues in = med();
    in.operational_cost.assign(kHorizonYears, 0.0);
    TechnologyParams tech = cfg().tech;
    tech.chp_cost_allocation = ChpCostAllocation::Full;
    Scenario s = cfg().scenario(ScenarioId::Market);  // no penalty
    s.gas_price.assign(kHorizonYears, 29.93);
    CHECK(annual_cost(Design::D1, Allocation{510, 0}, 1, s, in, tech) == doctest::Approx(29930.0));
  }

  TEST_CASE("fuel cost under energy-share allocation") {
    InputValues in = med();
    in.operational_cost.assign(kHorizonYears, 0.0);
    Scenario s = cfg().scenario(ScenarioId::Market);
    s.gas_price.assign(kHorizonYears, 29.93);
    // 510 MWh heat at 0.51 + 0.30 total efficiency.
    CHECK(annual_cost(Design::D1, Allocation{510, 0}, 1, s, in, cfg().tech) ==
          doctest::Approx(510.0 / 0.81 * 29.93));
  }

  TEST_CASE("market has no emissions term") {
    InputValues in = med();
    const Scenario& s = cfg().scenario(ScenarioId::Market);
    const Allocation a{0, 3000};
    const double cost = annual_cost(Design::D3, a, 2, s, in, cfg().tech);
    const double expected = 3000 / in.cop_heat_pump * s.elec_price[2] + in.operational_cost[2] * 1e6 * 1.0;
    CHECK(cost == doctest::Approx(expected));
  }

  TEST_CASE("capital only in year 0") {
    InputValues in = med();
    in.operational_cost.assign(kHorizonYears, 0.0);
    const Scenario& s = cfg().scenario(ScenarioId::Market);
    CHECK(annual_cost(Design::D3, Allocation{}, 0, s, in, cfg().tech) == doctest::Approx(3.0e6));
    CHECK(annual_cost(Design::D3, Allocation{}, 1, s, in, cfg().tech) == 0.0);
  }

  TEST_CASE("heat pump emissions") {
    InputValues in = med();
    CHECK(annual_emissions(Allocation{0, 360}, in, cfg().tech) == doctest::Approx(100 * 0.5070));
    CHECK(annual_emissions(Allocation{}, in, cfg().tech) == 0.0);
  }

  TEST_CASE("CHP emissions include NOx and gas import") {
    InputValues in = med();
    const double fuel = 510 / 0.51;
    CHECK(annual_emissions(Allocation{510, 0}, in, cfg().tech) ==
          doctest::Approx(fuel * (0.5100 + 0.1440 + 0.0503)));
  }

  TEST_CASE("D1 emits more than D3 at equal demand") {
    const Demand d{1600, 2400};
    CHECK(annual_emissions(dispatch(Design::D1, d), med(), cfg().tech) >
          annual_emissions(dispatch(Design::D3, d), med(), cfg().tech));
  }

  TEST_CASE("emissions monotone in each allocation component") {
    for (double c : {0.0, 10.0, 100.0})
      for (double h : {0.0, 10.0, 100.0}) {
        const double e = annual_emissions(Allocation{c, h}, med(), cfg().tech);
        CHECK(annual_emissions(Allocation{c + 1, h}, med(), cfg().tech) >= e);
        CHECK(annual_emissions(Allocation{c, h + 1}, med(), cfg().tech) >= e);
      }
  }
}

TEST_SUITE("npc") {
  TEST_CASE("examples") {
    std::vector<double> zero(20, 0.0);
    CHECK(npc(zero, 0.05) == 0.0);
    std::vector<double> c(20, 0.0);
    c[0] = 100;
    c[1] = 105;
    CHECK(npc(c, 0.05) == doctest::Approx(200e-6));
    std::vector<double> flat(20, 1e6);
    CHECK(npc(flat, 0.0) == doctest::Approx(20.0));
    CHECK_THROWS_WITH_AS(npc(flat, -0.01), "negative discount rate", InvalidInput);
  }
}

TEST_SUITE("simulate") {
  TEST_CASE("zero demand leaves capital and O&M") {
    const InputValues in = med();
    const auto r = simulate(Design::D2, cfg().scenario(ScenarioId::Green), in, cfg().tech, Demand{0, 0});
    CHECK(r.emissions_mton == 0.0);
    std::vector<double> costs(kHorizonYears);
    for (int y = 0; y < kHorizonYears; ++y) costs[static_cast<std::size_t>(y)] = in.operational_cost[static_cast<std::size_t>(y)] * 1e6;
    costs[0] += 2.5e6;
    CHECK(r.npc_mln_eur == doctest::Approx(npc(costs, in.discount_rate)));
  }

  TEST_CASE("result sums its per-year breakdown") {
    const auto r = run(Design::D2, ScenarioId::Neutral, med());
    REQUIRE(r.per_year.size() == 20);
    double disc = 0.0;
    double em = 0.0;
    for (const auto& y : r.per_year) {
      disc += y.discounted_cost_eur;
      em += y.emissions_mton;
    }
    CHECK(r.npc_mln_eur == doctest::Approx(disc / 1e6).epsilon(1e-9));
    CHECK(r.emissions_mton == doctest::Approx(em).epsilon(1e-12));
  }

  TEST_CASE("emissions ordering D1 > D2 > D3 for every combination") {
    for (ScenarioId s : kAllScenarios)
      for (Level a : kAllLevels)
        for (Level b : kAllLevels)
          for (Level c : kAllLevels)
            for (Level e : kAllLevels) {
              const auto in = resolve(cfg().levels, InputLevels{a, b, c, e});
              const double e1 = run(Design::D1, s, in).emissions_mton;
              const double e2 = run(Design::D2, s, in).emissions_mton;
              const double e3 = run(Design::D3, s, in).emissions_mton;
              CHECK(e1 > e2);
              CHECK(e2 > e3);
            }
  }

  TEST_CASE("green at medium levels: D1 costs more than D3") {
    CHECK(run(Design::D1, ScenarioId::Green, med()).npc_mln_eur > run(Design::D3, ScenarioId::Green, med()).npc_mln_eur);
  }

  TEST_CASE("market at medium levels: D1 < D2 < D3") {
    const double n1 = run(Design::D1, ScenarioId::Market, med()).npc_mln_eur;
    const double n2 = run(Design::D2, ScenarioId::Market, med()).npc_mln_eur;
    const double n3 = run(Design::D3, ScenarioId::Market, med()).npc_mln_eur;
    CHECK(n1 < n2);
    CHECK(n2 < n3);
  }

  TEST_CASE("scenario effect on emissions is bounded by demand growth") {
    const double bound = std::pow(1.01, 19) / std::pow(0.99, 19) - 1.0;
    for (Design d : kAllDesigns) {
      const double g = run(d, ScenarioId::Green, med()).emissions_mton;
      const double m = run(d, ScenarioId::Market, med()).emissions_mton;
      CHECK(std::abs(m - g) / g <= bound);
      CHECK(run(d, ScenarioId::Neutral, med()).emissions_mton ==
            doctest::Approx(20 * annual_emissions(dispatch(d, cfg().base_demand), med(), cfg().tech)));
    }
  }

  TEST_CASE("NPC increases with the carbon penalty") {
    for (Design d : kAllDesigns) {
      Scenario s = cfg().scenario(ScenarioId::Neutral);
      double last = -1.0;
      for (double p : {0.0, 10.0, 40.0, 100.0}) {
        s.carbon_penalty = p;
        const double v = simulate(d, s, med(), cfg().tech, cfg().base_demand).npc_mln_eur;
        CHECK(v > last);
        last = v;
      }
    }
  }

  TEST_CASE("NPC decreases as the COP level rises") {
    for (ScenarioId s : kAllScenarios)
      for (Design d : kAllDesigns) {
        double last = 1e300;
        for (Level l : kAllLevels) {
          InputLevels lv;
          lv.cop = l;
          const double v = run(d, s, resolve(cfg().levels, lv)).npc_mln_eur;
          CHECK(v < last);
          last = v;
        }
      }
  }

  TEST_CASE("NPC decreases with the discount rate") {
    for (ScenarioId s : kAllScenarios)
      for (Design d : kAllDesigns) {
        double last = 1e300;
        for (Level l : kAllLevels) {
          InputLevels lv;
          lv.discount_rate = l;
          const double v = run(d, s, resolve(cfg().levels, lv)).npc_mln_eur;
          CHECK(v < last);
          last = v;
        }
      }
  }

  TEST_CASE("bit-identical reruns") {
    const auto a = run(Design::D2, ScenarioId::Green, med());
    const auto b = run(Design::D2, ScenarioId::Green, med());
    CHECK(a.npc_mln_eur == b.npc_mln_eur);
    CHECK(a.emissions_mton == b.emissions_mton);
  }

  TEST_CASE("invalid technology values") {
    InputValues in = med();
    in.cop_heat_pump = 1.0;
    CHECK_THROWS_AS(run(Design::D3, ScenarioId::Green, in), InvalidInput);
    in = med();
    in.chp_heat_efficiency = 1.2;
    CHECK_THROWS_AS(run(Design::D1, ScenarioId::Green, in), InvalidInput);
  }

  TEST_CASE("names round-trip") {
    for (Design d : kAllDesigns) CHECK(parse_design(to_string(d)) == d);
    for (ScenarioId s : kAllScenarios) CHECK(parse_scenario(to_string(s)) == s);
    for (Level l : kAllLevels) CHECK(parse_level(to_string(l)) == l);
    CHECK_THROWS_AS(parse_scenario("brown"), InvalidInput);
  }
}

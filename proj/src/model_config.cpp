#include "stochorder/model_config.hpp"

#include <yaml-cpp/yaml.h>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "stochorder/errors.hpp"

namespace stochorder {

using heat::Level;
using heat::ScenarioId;

ModelConfig ModelConfig::defaults() {
  ModelConfig cfg;

  auto& green = cfg.scenarios[heat::index(ScenarioId::Green)];
  green.id = ScenarioId::Green;
  green.carbon_penalty = 100.0;
  green.demand_growth = -0.01;
  green.elec_price = {113.07, 119.72, 120.83, 125.26, 129.70, 134.13, 136.35, 136.35, 136.35, 139.67,
                      138.56, 138.56, 138.56, 138.56, 138.56, 138.56, 138.56, 138.56, 138.56, 138.56};
  green.gas_price = {42.12, 43.23, 44.34, 44.34, 45.45, 46.56, 47.67, 49.88, 49.88, 49.88,
                     49.88, 49.88, 49.88, 49.88, 49.88, 49.88, 49.88, 49.88, 49.88, 49.88};

  auto& neutral = cfg.scenarios[heat::index(ScenarioId::Neutral)];
  neutral.id = ScenarioId::Neutral;
  neutral.carbon_penalty = 40.0;
  neutral.demand_growth = 0.0;
  neutral.elec_price = {125.26, 131.91, 135.24, 140.78, 145.22, 148.54, 150.76, 148.54, 147.43, 151.87,
                        151.87, 151.87, 151.87, 151.87, 151.87, 151.87, 151.87, 151.87, 151.87, 151.87};
  neutral.gas_price = {29.93, 31.04, 31.04, 32.15, 33.25, 34.36, 34.36, 35.47, 35.47, 35.47,
                       36.58, 36.58, 36.58, 36.58, 36.58, 36.58, 36.58, 36.58, 36.58, 36.58};

  auto& market = cfg.scenarios[heat::index(ScenarioId::Market)];
  market.id = ScenarioId::Market;
  market.carbon_penalty = 0.0;
  market.demand_growth = 0.01;
  market.elec_price = {147.43, 154.08, 155.19, 157.41, 161.84, 161.84, 165.17, 162.95, 161.84, 166.28,
                       171.82, 171.82, 171.82, 171.82, 171.82, 171.82, 171.82, 171.82, 171.82, 171.82};
  market.gas_price = std::vector<double>(heat::kHorizonYears, 22.5);

  auto& lv = cfg.levels;
  lv.operational_cost[heat::index(Level::Low)] = {0.0360, 0.0355, 0.0349, 0.0344, 0.0339, 0.0334, 0.0329,
                                                  0.0324, 0.0319, 0.0314, 0.0310, 0.0305, 0.0300, 0.0296,
                                                  0.0291, 0.0287, 0.0283, 0.0278, 0.0274, 0.0270};
  lv.operational_cost[heat::index(Level::Med)] = std::vector<double>(heat::kHorizonYears, 0.0360);
  lv.operational_cost[heat::index(Level::High)] = {0.0360, 0.0365, 0.0371, 0.0376, 0.0382, 0.0388, 0.0394,
                                                   0.0400, 0.0406, 0.0412, 0.0418, 0.0424, 0.0430, 0.0437,
                                                   0.0443, 0.0450, 0.0457, 0.0464, 0.0471, 0.0478};
  lv.discount_rate = {0.02, 0.05, 0.08};
  lv.cop_heat_pump = {3.0, 3.6, 5.0};
  lv.chp_heat_efficiency = {0.49, 0.51, 0.53};
  lv.chp_elec_efficiency = {0.27, 0.30, 0.33};
  lv.emission_factors = {heat::EmissionFactors{0.4335, 0.1224, 0.4309, 0.0428},
                         heat::EmissionFactors{0.5100, 0.1440, 0.5070, 0.0503},
                         heat::EmissionFactors{0.5865, 0.1656, 0.5831, 0.0578}};
  return cfg;
}

namespace {

int line_of(const YAML::Node& n) { return n.Mark().is_null() ? 0 : n.Mark().line + 1; }

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void require_map(const YAML::Node& n, const std::string& path, const std::set<std::string>& allowed) {
  if (!n.IsMap()) throw ConfigError(path, "expected a mapping", line_of(n));
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.contains(key)) throw ConfigError(join(path, key), "unknown key", line_of(kv.first));
  }
}

double read_number(const YAML::Node& n, const std::string& path) {
  if (!n.IsScalar()) throw ConfigError(path, "expected a number", line_of(n));
  try {
    return n.as<double>();
  } catch (const YAML::Exception&) {
    throw ConfigError(path, "expected a number, got '" + n.Scalar() + "'", line_of(n));
  }
}

double read_positive(const YAML::Node& n, const std::string& path) {
  const double v = read_number(n, path);
  if (!(v > 0.0)) throw ConfigError(path, "must be > 0", line_of(n));
  return v;
}

double read_nonnegative(const YAML::Node& n, const std::string& path) {
  const double v = read_number(n, path);
  if (!(v >= 0.0)) throw ConfigError(path, "must be >= 0", line_of(n));
  return v;
}

std::vector<double> read_trajectory(const YAML::Node& n, const std::string& path, bool positive) {
  if (!n.IsSequence()) throw ConfigError(path, "expected a list of " + std::to_string(heat::kHorizonYears) + " numbers", line_of(n));
  if (n.size() != static_cast<std::size_t>(heat::kHorizonYears))
    throw ConfigError(path, "expected " + std::to_string(heat::kHorizonYears) + " values, got " + std::to_string(n.size()),
                      line_of(n));
  std::vector<double> out;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    out.push_back(positive ? read_positive(n[i], p) : read_nonnegative(n[i], p));
  }
  return out;
}

const std::set<std::string> kLevelKeys{"low", "med", "high"};

template <typename F>
void for_each_level(const YAML::Node& n, const std::string& path, F&& f) {
  require_map(n, path, kLevelKeys);
  for (Level l : heat::kAllLevels) {
    const std::string key(heat::to_string(l));
    if (n[key]) f(l, n[key], join(path, key));
  }
}

void apply_levels(const YAML::Node& n, heat::LevelTable& lv) {
  const std::string path = "levels";
  require_map(n, path,
              {"operational_cost_mln_eur_per_mw", "discount_rate", "cop_heat_pump", "chp_heat_efficiency",
               "chp_elec_efficiency", "emission_factors_mton_per_mwh"});
  if (auto c = n["operational_cost_mln_eur_per_mw"]) {
    for_each_level(c, join(path, "operational_cost_mln_eur_per_mw"), [&](Level l, const YAML::Node& v, const std::string& p) {
      lv.operational_cost[heat::index(l)] = read_trajectory(v, p, false);
    });
  }
  if (auto c = n["discount_rate"]) {
    for_each_level(c, join(path, "discount_rate"), [&](Level l, const YAML::Node& v, const std::string& p) {
      lv.discount_rate[heat::index(l)] = read_nonnegative(v, p);
    });
  }
  if (auto c = n["cop_heat_pump"]) {
    for_each_level(c, join(path, "cop_heat_pump"), [&](Level l, const YAML::Node& v, const std::string& p) {
      const double cop = read_number(v, p);
      if (!(cop > 1.0)) throw ConfigError(p, "COP must be > 1", line_of(v));
      lv.cop_heat_pump[heat::index(l)] = cop;
    });
  }
  auto efficiency = [&](const char* key, std::array<double, 3>& dst) {
    if (auto c = n[key]) {
      for_each_level(c, join(path, key), [&](Level l, const YAML::Node& v, const std::string& p) {
        const double e = read_number(v, p);
        if (!(e > 0.0 && e <= 1.0)) throw ConfigError(p, "efficiency must lie in (0, 1]", line_of(v));
        dst[heat::index(l)] = e;
      });
    }
  };
  efficiency("chp_heat_efficiency", lv.chp_heat_efficiency);
  efficiency("chp_elec_efficiency", lv.chp_elec_efficiency);
  if (auto c = n["emission_factors_mton_per_mwh"]) {
    for_each_level(c, join(path, "emission_factors_mton_per_mwh"), [&](Level l, const YAML::Node& v, const std::string& p) {
      require_map(v, p, {"chp_co2", "chp_nox", "hp_co2", "gas_import_co2"});
      auto& ef = lv.emission_factors[heat::index(l)];
      if (v["chp_co2"]) ef.chp_co2 = read_nonnegative(v["chp_co2"], join(p, "chp_co2"));
      if (v["chp_nox"]) ef.chp_nox = read_nonnegative(v["chp_nox"], join(p, "chp_nox"));
      if (v["hp_co2"]) ef.hp_co2 = read_nonnegative(v["hp_co2"], join(p, "hp_co2"));
      if (v["gas_import_co2"]) ef.gas_import_co2 = read_nonnegative(v["gas_import_co2"], join(p, "gas_import_co2"));
    });
  }
}

const std::set<std::string> kDesignKeys{"d1", "d2", "d3"};

void apply_technology(const YAML::Node& n, heat::TechnologyParams& tech) {
  const std::string path = "technology";
  require_map(n, path, {"capital_cost_mln_eur", "capacity_mw", "nox_co2e_weight", "chp_cost_allocation"});
  if (auto c = n["capital_cost_mln_eur"]) {
    const std::string p = join(path, "capital_cost_mln_eur");
    require_map(c, p, kDesignKeys);
    for (heat::Design d : heat::kAllDesigns) {
      const std::string key(heat::to_string(d));
      if (c[key]) tech.capital_cost_mln[heat::index(d)] = read_nonnegative(c[key], join(p, key));
    }
  }
  if (auto c = n["capacity_mw"]) {
    const std::string p = join(path, "capacity_mw");
    require_map(c, p, kDesignKeys);
    for (heat::Design d : heat::kAllDesigns) {
      const std::string key(heat::to_string(d));
      if (!c[key]) continue;
      const std::string dp = join(p, key);
      require_map(c[key], dp, {"chp", "hp"});
      auto& cap = tech.capacity[heat::index(d)];
      if (c[key]["chp"]) cap.chp_mw = read_nonnegative(c[key]["chp"], join(dp, "chp"));
      if (c[key]["hp"]) cap.hp_mw = read_nonnegative(c[key]["hp"], join(dp, "hp"));
    }
  }
  if (auto c = n["nox_co2e_weight"]) tech.nox_co2e_weight = read_nonnegative(c, join(path, "nox_co2e_weight"));
  if (auto c = n["chp_cost_allocation"]) {
    const std::string v = c.IsScalar() ? c.Scalar() : "";
    if (v == "full") {
      tech.chp_cost_allocation = heat::ChpCostAllocation::Full;
    } else if (v == "energy_share") {
      tech.chp_cost_allocation = heat::ChpCostAllocation::EnergyShare;
    } else {
      throw ConfigError(join(path, "chp_cost_allocation"), "expected 'full' or 'energy_share'", line_of(c));
    }
  }
}

void apply_scenarios(const YAML::Node& n, std::array<heat::Scenario, 3>& scenarios) {
  const std::string path = "scenarios";
  require_map(n, path, {"green", "neutral", "market"});
  for (ScenarioId id : heat::kAllScenarios) {
    const std::string key(heat::to_string(id));
    const YAML::Node s = n[key];
    if (!s) continue;
    const std::string p = join(path, key);
    require_map(s, p,
                {"carbon_penalty_eur_per_mton", "demand_growth", "elec_price_eur_per_mwh", "gas_price_eur_per_mwh"});
    auto& sc = scenarios[heat::index(id)];
    if (s["carbon_penalty_eur_per_mton"])
      sc.carbon_penalty = read_nonnegative(s["carbon_penalty_eur_per_mton"], join(p, "carbon_penalty_eur_per_mton"));
    if (s["demand_growth"]) {
      sc.demand_growth = read_number(s["demand_growth"], join(p, "demand_growth"));
      if (!(sc.demand_growth > -1.0)) throw ConfigError(join(p, "demand_growth"), "must be > -1", line_of(s["demand_growth"]));
    }
    if (s["elec_price_eur_per_mwh"])
      sc.elec_price = read_trajectory(s["elec_price_eur_per_mwh"], join(p, "elec_price_eur_per_mwh"), true);
    if (s["gas_price_eur_per_mwh"])
      sc.gas_price = read_trajectory(s["gas_price_eur_per_mwh"], join(p, "gas_price_eur_per_mwh"), true);
  }
}

void apply_root(const YAML::Node& root, ModelConfig& cfg) {
  if (!root || root.IsNull()) return;
  require_map(root, "", {"demand", "technology", "levels", "scenarios"});
  if (auto d = root["demand"]) {
    require_map(d, "demand", {"baseload_mwh", "seasonal_mwh"});
    if (d["baseload_mwh"]) cfg.base_demand.baseload = read_nonnegative(d["baseload_mwh"], "demand.baseload_mwh");
    if (d["seasonal_mwh"]) cfg.base_demand.seasonal = read_nonnegative(d["seasonal_mwh"], "demand.seasonal_mwh");
  }
  if (auto t = root["technology"]) apply_technology(t, cfg.tech);
  if (auto l = root["levels"]) apply_levels(l, cfg.levels);
  if (auto s = root["scenarios"]) apply_scenarios(s, cfg.scenarios);
}

void apply_override(YAML::Node& root, const std::string& entry) {
  const auto eq = entry.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError(entry, "override must look like key.path=value");
  const std::string key = entry.substr(0, eq);
  const std::string value = entry.substr(eq + 1);

  std::vector<std::string> parts;
  std::stringstream ss(key);
  for (std::string part; std::getline(ss, part, '.');) {
    if (part.empty()) throw ConfigError(key, "empty path component in override");
    parts.push_back(part);
  }

  YAML::Node parsed;
  try {
    parsed = YAML::Load(value);
  } catch (const YAML::Exception& e) {
    throw ConfigError(key, std::string("cannot parse override value: ") + e.msg);
  }

  if (!root || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  // yaml-cpp nodes are handles, so walking with operator[] on copies writes
  // through to the root; reset() is needed to rebind rather than assign.
  YAML::Node cur = root;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    YAML::Node next = cur[parts[i]];
    if (!next.IsDefined() || next.IsNull()) {
      cur[parts[i]] = YAML::Node(YAML::NodeType::Map);
      next = cur[parts[i]];
    }
    if (!next.IsMap()) throw ConfigError(key, "override path does not name a section");
    cur.reset(next);
  }
  cur[parts.back()] = parsed;
}

ModelConfig build(YAML::Node root, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) apply_override(root, o);
  ModelConfig cfg = ModelConfig::defaults();
  apply_root(root, cfg);
  return cfg;
}

}  // namespace

ModelConfig apply_config_text(const std::string& yaml_text, const std::vector<std::string>& overrides) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("", e.msg, e.mark.line + 1);
  }
  return build(root, overrides);
}

ModelConfig load_model_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  return apply_config_text(buf.str(), overrides);
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string list(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += num(v[i]);
  }
  return s + "]";
}

}  // namespace

std::string canonical_yaml(const ModelConfig& cfg) {
  std::ostringstream o;
  o << "demand:\n"
    << "  baseload_mwh: " << num(cfg.base_demand.baseload) << "\n"
    << "  seasonal_mwh: " << num(cfg.base_demand.seasonal) << "\n";
  o << "technology:\n  capital_cost_mln_eur:\n";
  for (auto d : heat::kAllDesigns) o << "    " << heat::to_string(d) << ": " << num(cfg.tech.capital_cost_mln[heat::index(d)]) << "\n";
  o << "  capacity_mw:\n";
  for (auto d : heat::kAllDesigns) {
    const auto& c = cfg.tech.capacity[heat::index(d)];
    o << "    " << heat::to_string(d) << ": {chp: " << num(c.chp_mw) << ", hp: " << num(c.hp_mw) << "}\n";
  }
  o << "  nox_co2e_weight: " << num(cfg.tech.nox_co2e_weight) << "\n"
    << "  chp_cost_allocation: "
    << (cfg.tech.chp_cost_allocation == heat::ChpCostAllocation::Full ? "full" : "energy_share") << "\n";
  const auto& lv = cfg.levels;
  o << "levels:\n  operational_cost_mln_eur_per_mw:\n";
  for (auto l : heat::kAllLevels) o << "    " << heat::to_string(l) << ": " << list(lv.operational_cost[heat::index(l)]) << "\n";
  auto triple = [&](const char* key, const std::array<double, 3>& v) {
    o << "  " << key << ": {low: " << num(v[0]) << ", med: " << num(v[1]) << ", high: " << num(v[2]) << "}\n";
  };
  triple("discount_rate", lv.discount_rate);
  triple("cop_heat_pump", lv.cop_heat_pump);
  triple("chp_heat_efficiency", lv.chp_heat_efficiency);
  triple("chp_elec_efficiency", lv.chp_elec_efficiency);
  o << "  emission_factors_mton_per_mwh:\n";
  for (auto l : heat::kAllLevels) {
    const auto& ef = lv.emission_factors[heat::index(l)];
    o << "    " << heat::to_string(l) << ": {chp_co2: " << num(ef.chp_co2) << ", chp_nox: " << num(ef.chp_nox)
      << ", hp_co2: " << num(ef.hp_co2) << ", gas_import_co2: " << num(ef.gas_import_co2) << "}\n";
  }
  o << "scenarios:\n";
  for (auto id : heat::kAllScenarios) {
    const auto& s = cfg.scenario(id);
    o << "  " << heat::to_string(id) << ":\n"
      << "    carbon_penalty_eur_per_mton: " << num(s.carbon_penalty) << "\n"
      << "    demand_growth: " << num(s.demand_growth) << "\n"
      << "    elec_price_eur_per_mwh: " << list(s.elec_price) << "\n"
      << "    gas_price_eur_per_mwh: " << list(s.gas_price) << "\n";
  }
  return o.str();
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace stochorder

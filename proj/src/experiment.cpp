#include "stochorder/experiment.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "stochorder/errors.hpp"
#include "stochorder/parallel.hpp"

namespace stochorder {

using heat::Design;
using heat::Level;
using heat::ScenarioId;

FactorialDesign enumerate_factorial(const std::vector<FactorSpec>& factors) {
  if (factors.empty()) throw InvalidInput("no factors");
  FactorialDesign out;
  std::set<std::string> seen;
  for (const auto& f : factors) {
    if (f.levels.size() != 3) throw InvalidInput("expected 3 levels per factor");
    if (!seen.insert(f.name).second) throw InvalidInput("duplicate factor '" + f.name + "'");
    out.factors.push_back(f.name);
  }
  std::size_t total = 1;
  for (std::size_t f = 0; f < factors.size(); ++f) total *= 3;
  out.combos.reserve(total);
  for (std::size_t c = 0; c < total; ++c) {
    std::vector<Level> combo(factors.size());
    std::size_t code = c;
    for (std::size_t f = factors.size(); f-- > 0;) {
      combo[f] = factors[f].levels[code % 3];
      code /= 3;
    }
    out.combos.push_back(std::move(combo));
  }
  return out;
}

std::vector<FactorSpec> default_factors() {
  const std::vector<Level> lmh(heat::kAllLevels.begin(), heat::kAllLevels.end());
  return {{std::string(kFactorOperationalCost), lmh},
          {std::string(kFactorDiscountRate), lmh},
          {std::string(kFactorCop), lmh},
          {std::string(kFactorEmissionFactor), lmh}};
}

heat::InputLevels to_input_levels(const FactorialDesign& design, std::size_t combo) {
  if (combo >= design.combos.size()) throw InvalidInput("combo id out of range");
  heat::InputLevels lv;
  for (std::size_t f = 0; f < design.factors.size(); ++f) {
    const auto& name = design.factors[f];
    const Level l = design.combos[combo][f];
    if (name == kFactorOperationalCost) {
      lv.operational_cost = l;
    } else if (name == kFactorDiscountRate) {
      lv.discount_rate = l;
    } else if (name == kFactorCop) {
      lv.cop = l;
    } else if (name == kFactorEmissionFactor) {
      lv.emission_factor = l;
    } else {
      throw InvalidInput("unknown factor '" + name + "'");
    }
  }
  return lv;
}

ExperimentDataset run_experiment(const std::vector<Design>& designs, const std::vector<ScenarioId>& scenarios,
                                 const FactorialDesign& factorial, const ModelConfig& config) {
  if (scenarios.empty()) throw InvalidInput("no scenarios");
  if (designs.empty()) throw InvalidInput("no designs");
  if (factorial.combos.empty()) throw InvalidInput("no factor combinations");
  if (std::set<ScenarioId>(scenarios.begin(), scenarios.end()).size() != scenarios.size())
    throw InvalidInput("duplicate scenario");
  if (std::set<Design>(designs.begin(), designs.end()).size() != designs.size()) throw InvalidInput("duplicate design");

  const std::size_t nc = factorial.combos.size();
  const std::size_t nd = designs.size();
  std::vector<heat::InputValues> inputs;
  inputs.reserve(nc);
  for (std::size_t c = 0; c < nc; ++c) inputs.push_back(heat::resolve(config.levels, to_input_levels(factorial, c)));

  ExperimentDataset ds;
  ds.rows.resize(scenarios.size() * nd * nc);
  parallel_for(ds.rows.size(), [&](std::size_t i) {
    const ScenarioId s = scenarios[i / (nd * nc)];
    const Design d = designs[(i / nc) % nd];
    const auto c = static_cast<int>(i % nc);
    try {
      const auto res = heat::simulate(d, config.scenario(s), inputs[static_cast<std::size_t>(c)], config.tech,
                                      config.base_demand);
      ds.rows[i] = {s, d, c, res.npc_mln_eur, res.emissions_mton};
    } catch (const std::exception& e) {
      throw InvalidInput("simulation failed for scenario " + std::string(heat::to_string(s)) + ", design " +
                         std::string(heat::to_string(d)) + ", combo " + std::to_string(c) + ": " + e.what());
    }
  });

  ds.metadata.config_hash = config_hash(config);
  ds.metadata.num_combos = static_cast<int>(nc);
  ds.metadata.scenarios = scenarios;
  ds.metadata.designs = designs;
  return ds;
}

std::string_view to_string(GroupBy g) {
  return g == GroupBy::DesignWithinScenario ? "design_within_scenario" : "scenario_within_design";
}

std::string_view to_string(OutputKind o) {
  switch (o) {
    case OutputKind::Npc:
      return "npc";
    case OutputKind::Emissions:
      return "emissions";
    case OutputKind::Both:
      return "both";
  }
  return "?";
}

namespace {

// Rows of one (scenario, design) cell, indexed by combo_id.
using CellKey = std::pair<ScenarioId, Design>;

std::map<CellKey, std::vector<const DatasetRow*>> index_cells(const ExperimentDataset& ds) {
  const auto& md = ds.metadata;
  if (md.num_combos <= 0 || md.scenarios.empty() || md.designs.empty()) throw InvalidInput("incomplete dataset");
  std::map<CellKey, std::vector<const DatasetRow*>> cells;
  for (auto s : md.scenarios)
    for (auto d : md.designs) cells[{s, d}].assign(static_cast<std::size_t>(md.num_combos), nullptr);
  for (const auto& row : ds.rows) {
    auto it = cells.find({row.scenario, row.design});
    if (it == cells.end() || row.combo_id < 0 || row.combo_id >= md.num_combos)
      throw InvalidInput("dataset row outside the declared design");
    auto& slot = it->second[static_cast<std::size_t>(row.combo_id)];
    if (slot) throw InvalidInput("duplicate dataset row");
    slot = &row;
  }
  for (const auto& [key, rows] : cells) {
    for (const auto* r : rows) {
      if (!r)
        throw InvalidInput("incomplete dataset: missing rows for scenario " + std::string(heat::to_string(key.first)) +
                           ", design " + std::string(heat::to_string(key.second)));
    }
  }
  return cells;
}

GroupMember make_member(std::string label, const std::vector<const DatasetRow*>& rows, OutputKind output) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (output == OutputKind::Both) {
    Eigen::MatrixXd pts(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
      pts(i, 0) = rows[static_cast<std::size_t>(i)]->npc_mln_eur;
      pts(i, 1) = rows[static_cast<std::size_t>(i)]->emissions_mton;
    }
    return {std::move(label), MultiSample(std::move(pts), {"npc_mln_eur", "emissions_mton"})};
  }
  std::vector<double> v;
  v.reserve(rows.size());
  for (const auto* r : rows) v.push_back(output == OutputKind::Npc ? r->npc_mln_eur : r->emissions_mton);
  return {std::move(label), Sample(std::move(v), output == OutputKind::Npc ? "npc_mln_eur" : "emissions_mton")};
}

}  // namespace

Grouping group_outputs(const ExperimentDataset& ds, GroupBy by, OutputKind output) {
  const auto cells = index_cells(ds);
  const auto& md = ds.metadata;
  Grouping g{by, output, {}};
  if (by == GroupBy::DesignWithinScenario) {
    for (auto s : md.scenarios) {
      GroupContext ctx{std::string(heat::to_string(s)), {}};
      for (auto d : md.designs) ctx.members.push_back(make_member(std::string(heat::to_string(d)), cells.at({s, d}), output));
      g.contexts.push_back(std::move(ctx));
    }
  } else {
    for (auto d : md.designs) {
      GroupContext ctx{std::string(heat::to_string(d)), {}};
      for (auto s : md.scenarios) ctx.members.push_back(make_member(std::string(heat::to_string(s)), cells.at({s, d}), output));
      g.contexts.push_back(std::move(ctx));
    }
  }
  return g;
}

namespace {

constexpr const char* kCsvHeader = "scenario,design,combo_id,npc_mln_eur,emissions_mton";

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, end);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string f; std::getline(ss, f, sep);) out.push_back(f);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw InvalidInput(where + ": bad number '" + s + "'");
  return v;
}

}  // namespace

std::string dataset_csv(const ExperimentDataset& ds) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : ds.rows) {
    out += heat::to_string(r.scenario);
    out += ',';
    out += heat::to_string(r.design);
    out += ',';
    out += std::to_string(r.combo_id);
    out += ',';
    out += format_double(r.npc_mln_eur);
    out += ',';
    out += format_double(r.emissions_mton);
    out += '\n';
  }
  return out;
}

std::string metadata_path(const std::string& csv_path) { return csv_path + ".meta.json"; }

void write_dataset(const ExperimentDataset& ds, const std::string& csv_path) {
  {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw IoError(csv_path, "cannot write dataset");
    out << dataset_csv(ds);
    if (!out) throw IoError(csv_path, "write failed");
  }
  nlohmann::ordered_json meta;
  meta["config_hash"] = ds.metadata.config_hash;
  meta["timestamp"] = ds.metadata.timestamp;
  meta["num_combos"] = ds.metadata.num_combos;
  auto& sc = meta["scenarios"] = nlohmann::ordered_json::array();
  for (auto s : ds.metadata.scenarios) sc.push_back(heat::to_string(s));
  auto& de = meta["designs"] = nlohmann::ordered_json::array();
  for (auto d : ds.metadata.designs) de.push_back(heat::to_string(d));
  const auto mpath = metadata_path(csv_path);
  std::ofstream out(mpath, std::ios::binary);
  if (!out) throw IoError(mpath, "cannot write dataset metadata");
  out << meta.dump(2) << "\n";
  if (!out) throw IoError(mpath, "write failed");
}

ExperimentDataset read_dataset(const std::string& csv_path) {
  ExperimentDataset ds;
  const auto mpath = metadata_path(csv_path);
  {
    std::ifstream in(mpath);
    if (!in) throw IoError(mpath, "cannot open dataset metadata");
    try {
      const auto meta = nlohmann::json::parse(in);
      ds.metadata.config_hash = meta.at("config_hash").get<std::string>();
      ds.metadata.timestamp = meta.value("timestamp", "");
      ds.metadata.num_combos = meta.at("num_combos").get<int>();
      for (const auto& s : meta.at("scenarios")) ds.metadata.scenarios.push_back(heat::parse_scenario(s.get<std::string>()));
      for (const auto& d : meta.at("designs")) ds.metadata.designs.push_back(heat::parse_design(d.get<std::string>()));
    } catch (const nlohmann::json::exception& e) {
      throw IoError(mpath, std::string("malformed dataset metadata (") + e.what() + ")");
    }
  }

  std::ifstream in(csv_path);
  if (!in) throw IoError(csv_path, "cannot open dataset");
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw IoError(csv_path, "unexpected dataset header");
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    const std::string where = csv_path + ":" + std::to_string(lineno);
    if (f.size() != 5) throw IoError(where, "expected 5 fields");
    try {
      DatasetRow r{heat::parse_scenario(f[0]), heat::parse_design(f[1]), 0, 0.0, 0.0};
      r.combo_id = static_cast<int>(parse_double(f[2], where));
      r.npc_mln_eur = parse_double(f[3], where);
      r.emissions_mton = parse_double(f[4], where);
      ds.rows.push_back(r);
    } catch (const InvalidInput& e) {
      throw IoError(where, e.what());
    }
  }
  return ds;
}

std::string config_hash(const ModelConfig& config) { return fnv1a_hex(canonical_yaml(config)); }

}  // namespace stochorder

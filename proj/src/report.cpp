#include "stochorder/report.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "stochorder/errors.hpp"

namespace stochorder {

using json = nlohmann::ordered_json;

std::string_view to_string(TableAxis a) { return a == TableAxis::Design ? "design" : "scenario"; }

std::string_view to_string(TableOutput o) {
  switch (o) {
    case TableOutput::Npc:
      return "npc";
    case TableOutput::Emissions:
      return "emissions";
    case TableOutput::Dispersion:
      return "dispersion";
  }
  return "?";
}

TableAxis axis_of(GroupBy by) { return by == GroupBy::DesignWithinScenario ? TableAxis::Design : TableAxis::Scenario; }

SampleGroups sample_groups(const Grouping& g) {
  if (g.output == OutputKind::Both) throw InvalidInput("sample_groups needs a univariate grouping");
  SampleGroups out{std::string(to_string(g.output)), std::string(to_string(g.by)), axis_of(g.by), {}};
  for (const auto& ctx : g.contexts) {
    SampleContext sc{ctx.context, {}};
    for (const auto& m : ctx.members) sc.members.push_back({m.label, std::get<Sample>(m.data)});
    out.contexts.push_back(std::move(sc));
  }
  return out;
}

SampleGroups dispersion_groups(const Grouping& g, const DispersionConfig& cfg) {
  if (g.output != OutputKind::Both) throw InvalidInput("dispersion_groups needs a two-output grouping");
  DispersionConfig side = cfg;
  side.seed = side_seeds(cfg).first;
  SampleGroups out{std::string(to_string(cfg.metric)), std::string(to_string(g.by)), axis_of(g.by), {}};
  for (const auto& ctx : g.contexts) {
    SampleContext sc{ctx.context, {}};
    for (const auto& m : ctx.members)
      sc.members.push_back({m.label, dispersion_sample(std::get<MultiSample>(m.data), side).values});
    out.contexts.push_back(std::move(sc));
  }
  return out;
}

namespace {

PairwiseTable empty_table(TableAxis axis, TableOutput output, const std::vector<std::string>& labels,
                          const std::vector<std::string>& contexts, const TestConfig& test) {
  PairwiseTable t;
  t.axis = axis;
  t.output = output;
  t.labels = labels;
  t.contexts = contexts;
  t.alpha = test.alpha;
  t.num_comparisons = test.num_comparisons;
  t.adjusted_level = test.adjusted_level();
  const std::size_t n = labels.size();
  t.cells.assign(n, std::vector<std::vector<TableCell>>(n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (r != c) t.cells[r][c].resize(contexts.size());
  return t;
}

Relation flip(Relation r) {
  if (r == Relation::LeftDominates) return Relation::RightDominates;
  if (r == Relation::RightDominates) return Relation::LeftDominates;
  return r;
}

// Fills cells (i, j) and (j, i) of context k from samples si, sj where
// `rel` is fsd_compare(si, sj).
void fill_pair(PairwiseTable& t, std::size_t i, std::size_t j, std::size_t k, const Sample& si, const Sample& sj,
               Relation rel, const TestConfig& test) {
  TableCell& ij = t.cells[i][j][k];
  TableCell& ji = t.cells[j][i][k];
  ij.relation = rel;
  ji.relation = flip(rel);
  if (rel == Relation::Incomparable) {
    ij.kind = ji.kind = CellKind::Na;
    return;
  }
  const double d = ks_distance(si, sj);
  // The value goes where the column dominates the row. Equal CDFs put the
  // zero in the upper triangle.
  const bool column_j_dominates = rel == Relation::RightDominates || rel == Relation::Equal;
  TableCell& value_cell = column_j_dominates ? ij : ji;
  TableCell& dash_cell = column_j_dominates ? ji : ij;
  value_cell.kind = CellKind::Ks;
  value_cell.ks = d;
  dash_cell.kind = CellKind::Dash;

  const KsResult pij = ks_one_sided_test(si, sj, test);
  const KsResult pji = ks_one_sided_test(sj, si, test);
  ij.p_value = pij.p_value;
  ij.rejected = pij.rejected;
  ji.p_value = pji.p_value;
  ji.rejected = pji.rejected;
}

void require_aligned(const std::vector<std::vector<std::string>>& labels_per_context) {
  if (labels_per_context.empty()) throw InvalidInput("empty input");
  for (const auto& l : labels_per_context) {
    if (l != labels_per_context.front()) throw InvalidInput("group labels differ between contexts");
    if (l.size() < 2) throw InvalidInput("a table needs at least two members per context");
  }
}

}  // namespace

PairwiseTable pairwise_dominance_table(const SampleGroups& groups, TableOutput output, const TestConfig& test) {
  std::vector<std::vector<std::string>> labels;
  std::vector<std::string> contexts;
  std::size_t size = 0;
  for (const auto& ctx : groups.contexts) {
    contexts.push_back(ctx.context);
    auto& l = labels.emplace_back();
    for (const auto& m : ctx.members) {
      l.push_back(m.label);
      if (size == 0) size = m.sample.size();
      if (m.sample.size() != size) throw InvalidInput("group size mismatch");
    }
  }
  require_aligned(labels);

  PairwiseTable t = empty_table(groups.axis, output, labels.front(), contexts, test);
  for (std::size_t k = 0; k < groups.contexts.size(); ++k) {
    const auto& m = groups.contexts[k].members;
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = i + 1; j < m.size(); ++j)
        fill_pair(t, i, j, k, m[i].sample, m[j].sample, fsd_compare(m[i].sample, m[j].sample).relation, test);
  }
  return t;
}

PairwiseTable dispersion_table(const Grouping& g, const DispersionConfig& cfg, const TestConfig& test) {
  if (g.output != OutputKind::Both) throw InvalidInput("dispersion_table needs a two-output grouping");
  std::vector<std::vector<std::string>> labels;
  std::vector<std::string> contexts;
  for (const auto& ctx : g.contexts) {
    contexts.push_back(ctx.context);
    auto& l = labels.emplace_back();
    for (const auto& m : ctx.members) l.push_back(m.label);
  }
  require_aligned(labels);

  PairwiseTable t = empty_table(axis_of(g.by), TableOutput::Dispersion, labels.front(), contexts, test);
  for (std::size_t k = 0; k < g.contexts.size(); ++k) {
    const auto& m = g.contexts[k].members;
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (std::size_t j = i + 1; j < m.size(); ++j) {
        const auto cmp =
            dispersion_compare(std::get<MultiSample>(m[i].data), std::get<MultiSample>(m[j].data), cfg, test);
        fill_pair(t, i, j, k, cmp.a.values, cmp.b.values, cmp.verdict.relation, test);
      }
    }
  }
  return t;
}

namespace {

std::string shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, end);
}

std::string printf_g(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace

CdfCurve cdf_curve(const Sample& s, std::string label) {
  const EmpiricalCdf cdf = build_ecdf(s);
  CdfCurve c{std::move(label), {}};
  for (std::size_t i = 0; i < cdf.support.size(); ++i) c.points.emplace_back(cdf.support[i], cdf.probs[i]);
  return c;
}

std::string curve_file_name(const std::string& output, const std::string& grouping, const std::string& context,
                            const std::string& label) {
  return output + "_" + grouping + "_" + context + "_" + label + ".csv";
}

std::string curve_csv(const CdfCurve& curve) {
  std::string out = "value,cum_prob\n";
  for (const auto& [v, p] : curve.points) out += shortest(v) + "," + shortest(p) + "\n";
  return out;
}

std::vector<CurveFile> export_cdf_curves(const SampleGroups& groups, const std::string& dir) {
  std::vector<CurveFile> files;
  for (const auto& ctx : groups.contexts) {
    if (ctx.members.empty()) throw InvalidInput("empty group");
    for (const auto& m : ctx.members) {
      const std::string name = curve_file_name(groups.output, groups.grouping, ctx.context, m.label);
      const std::string path = (std::filesystem::path(dir) / name).string();
      std::ofstream out(path, std::ios::binary);
      if (!out) throw IoError(path, "cannot write curve file");
      out << curve_csv(cdf_curve(m.sample, m.label));
      if (!out) throw IoError(path, "write failed");
      files.push_back({groups.output, groups.grouping, ctx.context, m.label, name});
    }
  }
  return files;
}

CdfCurve read_cdf_curve(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open curve file");
  std::string line;
  if (!std::getline(in, line) || line != "value,cum_prob") throw IoError(path, "unexpected curve header");
  CdfCurve c{std::filesystem::path(path).stem().string(), {}};
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    double v = 0.0;
    double p = 0.0;
    const char* b = line.data();
    const char* e = b + line.size();
    if (comma == std::string::npos || std::from_chars(b, b + comma, v).ec != std::errc() ||
        std::from_chars(b + comma + 1, e, p).ec != std::errc())
      throw IoError(path, "malformed curve row '" + line + "'");
    c.points.emplace_back(v, p);
  }
  return c;
}

std::string format_p_value(double p, bool rejected) {
  std::string s = p < 1e-4 ? "<0.001" : printf_g("%.3g", p);
  return rejected ? s + "*" : s;
}

std::string format_ks_triple(const PairwiseTable& t, std::size_t row, std::size_t col) {
  std::string out;
  for (std::size_t k = 0; k < t.contexts.size(); ++k) {
    if (k) out += "/";
    const auto& c = t.at(row, col, k);
    switch (c.kind) {
      case CellKind::Ks:
        out += printf_g("%.2g", c.ks);
        break;
      case CellKind::Dash:
        out += "-";
        break;
      case CellKind::Na:
        out += "NA";
        break;
    }
  }
  return out;
}

std::string format_p_triple(const PairwiseTable& t, std::size_t row, std::size_t col) {
  std::string out;
  for (std::size_t k = 0; k < t.contexts.size(); ++k) {
    if (k) out += "/";
    const auto& c = t.at(row, col, k);
    out += c.p_value ? format_p_value(*c.p_value, c.rejected.value_or(false)) : "NA";
  }
  return out;
}

namespace {

json table_json(const PairwiseTable& t) {
  json j;
  j["axis"] = to_string(t.axis);
  j["output"] = to_string(t.output);
  j["labels"] = t.labels;
  j["contexts"] = t.contexts;
  j["alpha"] = t.alpha;
  j["num_comparisons"] = t.num_comparisons;
  j["adjusted_alpha"] = t.adjusted_level;
  json cells = json::array();
  for (std::size_t r = 0; r < t.labels.size(); ++r) {
    for (std::size_t c = 0; c < t.labels.size(); ++c) {
      if (r == c) continue;
      json cell;
      cell["row"] = t.labels[r];
      cell["col"] = t.labels[c];
      json ks = json::object();
      json p = json::object();
      json rej = json::object();
      json rel = json::object();
      for (std::size_t k = 0; k < t.contexts.size(); ++k) {
        const auto& tc = t.at(r, c, k);
        const auto& ctx = t.contexts[k];
        switch (tc.kind) {
          case CellKind::Ks:
            ks[ctx] = tc.ks;
            break;
          case CellKind::Dash:
            ks[ctx] = "-";
            break;
          case CellKind::Na:
            ks[ctx] = "NA";
            break;
        }
        p[ctx] = tc.p_value ? json(*tc.p_value) : json(nullptr);
        rej[ctx] = tc.rejected ? json(*tc.rejected) : json(nullptr);
        rel[ctx] = to_string(tc.relation);
      }
      cell["ks"] = std::move(ks);
      cell["p_value"] = std::move(p);
      cell["rejected"] = std::move(rej);
      cell["relation"] = std::move(rel);
      cell["ks_text"] = format_ks_triple(t, r, c);
      cell["p_text"] = format_p_triple(t, r, c);
      cells.push_back(std::move(cell));
    }
  }
  j["cells"] = std::move(cells);
  return j;
}

}  // namespace

std::string render_report(const std::vector<PairwiseTable>& tables, const std::vector<CurveFile>& curves,
                          const ReportInfo& info) {
  if (tables.empty()) throw InvalidInput("empty input");
  json j;
  j["schema_version"] = 1;
  j["config_hash"] = info.config_hash;
  json sig;
  sig["alpha"] = info.test.alpha;
  sig["num_comparisons"] = info.test.num_comparisons;
  sig["adjusted_alpha"] = info.test.adjusted_level();
  sig["adjusted_alpha_text"] = printf_g("%.4f", info.test.adjusted_level());
  if (const auto* perm = std::get_if<Permutation>(&info.test.method)) {
    sig["p_value_method"] = "permutation";
    sig["num_permutations"] = perm->num_permutations;
    sig["permutation_seed"] = perm->seed;
  } else {
    sig["p_value_method"] = "asymptotic";
  }
  sig["dependent_samples"] = info.test.dependent_samples;
  j["significance"] = std::move(sig);

  const auto& d = info.dispersion;
  json disp;
  disp["metric"] = to_string(d.metric);
  disp["k"] = d.k;
  disp["resampling"] = to_string(d.resampling);
  disp["num_resamples"] = d.num_resamples;
  disp["seed"] = d.seed;
  disp["normalize"] = d.normalize_effective();
  disp["pairing"] = d.pairing == SeedPairing::Shared ? "shared" : "independent";
  j["dispersion"] = std::move(disp);

  json tj = json::array();
  for (const auto& t : tables) tj.push_back(table_json(t));
  j["tables"] = std::move(tj);

  json cj = json::array();
  for (const auto& c : curves) {
    cj.push_back({{"output", c.output}, {"grouping", c.grouping}, {"context", c.context}, {"label", c.label},
                  {"file", c.file}});
  }
  j["curves"] = std::move(cj);
  return j.dump(2) + "\n";
}

AnalysisResult analyze_dataset(const ExperimentDataset& ds, const TestConfig& test, const DispersionConfig& disp,
                               const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError(out_dir, "cannot create output directory");

  AnalysisResult res;
  for (OutputKind out : {OutputKind::Npc, OutputKind::Emissions}) {
    const TableOutput to = out == OutputKind::Npc ? TableOutput::Npc : TableOutput::Emissions;
    for (GroupBy by : {GroupBy::DesignWithinScenario, GroupBy::ScenarioWithinDesign}) {
      const SampleGroups sg = sample_groups(group_outputs(ds, by, out));
      res.tables.push_back(pairwise_dominance_table(sg, to, test));
      auto files = export_cdf_curves(sg, out_dir);
      res.curves.insert(res.curves.end(), files.begin(), files.end());
    }
  }
  for (GroupBy by : {GroupBy::DesignWithinScenario, GroupBy::ScenarioWithinDesign}) {
    const Grouping g = group_outputs(ds, by, OutputKind::Both);
    const SampleGroups sg = dispersion_groups(g, disp);
    // With shared seeds every member's statistic sample is the same in each
    // pair it enters, so the per-member samples give the same table.
    res.tables.push_back(disp.pairing == SeedPairing::Shared
                             ? pairwise_dominance_table(sg, TableOutput::Dispersion, test)
                             : dispersion_table(g, disp, test));
    auto files = export_cdf_curves(sg, out_dir);
    res.curves.insert(res.curves.end(), files.begin(), files.end());
  }

  res.report_json = render_report(res.tables, res.curves, {ds.metadata.config_hash, test, disp});
  const std::string path = (std::filesystem::path(out_dir) / "report.json").string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path, "cannot write report");
  out << res.report_json;
  if (!out) throw IoError(path, "write failed");
  return res;
}

}  // namespace stochorder

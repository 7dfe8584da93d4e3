#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stochorder/dispersion.hpp"
#include "stochorder/experiment.hpp"
#include "stochorder/ordering.hpp"
#include "stochorder/sample.hpp"

namespace stochorder {

enum class TableAxis { Design, Scenario };
enum class TableOutput { Npc, Emissions, Dispersion };

std::string_view to_string(TableAxis a);
std::string_view to_string(TableOutput o);

// Ks: the column's CDF lies below the row's, value is the KS distance.
// Dash: dominance runs the other way (the value sits in the transposed cell).
// Na: the CDFs cross, no dominance and no test.
enum class CellKind { Ks, Dash, Na };

struct TableCell {
  Relation relation = Relation::Equal;  // fsd_compare(row, col)
  CellKind kind = CellKind::Na;
  double ks = 0.0;
  // ks_one_sided_test(row, col): H0 is "the column dominates the row".
  std::optional<double> p_value;
  std::optional<bool> rejected;
};

struct PairwiseTable {
  TableAxis axis = TableAxis::Design;
  TableOutput output = TableOutput::Npc;
  std::vector<std::string> labels;
  std::vector<std::string> contexts;
  double alpha = 0.05;
  int num_comparisons = 3;
  double adjusted_level = 0.05 / 3;
  // cells[row][col][context]; diagonal entries are left empty.
  std::vector<std::vector<std::vector<TableCell>>> cells;

  const TableCell& at(std::size_t row, std::size_t col, std::size_t context) const {
    return cells.at(row).at(col).at(context);
  }
};

struct LabeledSample {
  std::string label;
  Sample sample;
};

struct SampleContext {
  std::string context;
  std::vector<LabeledSample> members;
};

// Univariate samples ready for tables and curve export. `output` and
// `grouping` are the tokens used in curve file names.
struct SampleGroups {
  std::string output;
  std::string grouping;
  TableAxis axis = TableAxis::Design;
  std::vector<SampleContext> contexts;
};

TableAxis axis_of(GroupBy by);

// Npc or Emissions groupings only.
SampleGroups sample_groups(const Grouping& g);

// Dispersion statistic samples for a Both grouping, drawn with the seed the
// first side of dispersion_compare uses.
SampleGroups dispersion_groups(const Grouping& g, const DispersionConfig& cfg);

PairwiseTable pairwise_dominance_table(const SampleGroups& groups, TableOutput output, const TestConfig& test);

PairwiseTable dispersion_table(const Grouping& g, const DispersionConfig& cfg, const TestConfig& test);

struct CdfCurve {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (value, cumulative probability)
};

CdfCurve cdf_curve(const Sample& s, std::string label);

struct CurveFile {
  std::string output;
  std::string grouping;
  std::string context;
  std::string label;
  std::string file;  // name relative to the export directory
};

std::string curve_file_name(const std::string& output, const std::string& grouping, const std::string& context,
                            const std::string& label);
std::string curve_csv(const CdfCurve& curve);

// Writes <output>_<grouping>_<context>_<label>.csv for each member.
std::vector<CurveFile> export_cdf_curves(const SampleGroups& groups, const std::string& dir);

// Reads a value,cum_prob file back.
CdfCurve read_cdf_curve(const std::string& path);

// "1/0.37/-" style rendering of one (row, col) pair across contexts.
std::string format_ks_triple(const PairwiseTable& t, std::size_t row, std::size_t col);
std::string format_p_triple(const PairwiseTable& t, std::size_t row, std::size_t col);
std::string format_p_value(double p, bool rejected);

struct ReportInfo {
  std::string config_hash;
  TestConfig test;
  DispersionConfig dispersion;
};

// JSON report: tables with per-context cells, curve file references, the
// config hash and the adjusted significance level. No timestamp, so equal
// inputs give byte-identical output.
std::string render_report(const std::vector<PairwiseTable>& tables, const std::vector<CurveFile>& curves,
                          const ReportInfo& info);

struct AnalysisResult {
  std::vector<PairwiseTable> tables;
  std::vector<CurveFile> curves;
  std::string report_json;
};

// Four ordering tables (NPC and emissions on both axes), two dispersion
// tables, curve CSVs and report.json written under `out_dir`.
AnalysisResult analyze_dataset(const ExperimentDataset& ds, const TestConfig& test, const DispersionConfig& disp,
                               const std::string& out_dir);

}  // namespace stochorder

// stochorder: simulate the district-heating experiment, analyse it, or
// compare two sample files directly.
//
// Exit codes: 0 success, 1 invalid data, 2 usage or config error,
// 3 dataset produced under a different config, 4 I/O error.

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "stochorder/dispersion.hpp"
#include "stochorder/errors.hpp"
#include "stochorder/experiment.hpp"
#include "stochorder/model_config.hpp"
#include "stochorder/ordering.hpp"
#include "stochorder/report.hpp"

namespace so = stochorder;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kInvalidData = 1, kConfig = 2, kStale = 3, kIo = 4 };

struct Options {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir = "out";
  std::string dataset;
  std::vector<std::string> scenarios;
  std::vector<std::string> designs;

  std::uint64_t seed = so::DispersionConfig{}.seed;
  std::size_t bootstrap = so::DispersionConfig{}.num_resamples;
  std::string metric = "simplex";
  int k = 2;
  std::string normalize = "auto";
  std::string resampling = "auto";

  double alpha = 0.05;
  int comparisons = 3;
  std::size_t permutations = 0;

  std::string sample_a;
  std::string sample_b;
  std::string dispersion;
};

so::ModelConfig load_config(const Options& o) {
  if (o.config_path.empty()) return so::apply_config_text("", o.overrides);
  return so::load_model_config(o.config_path, o.overrides);
}

template <typename T, typename Parse, typename All>
std::vector<T> select(const char* flag, const std::vector<std::string>& names, Parse parse, const All& all) {
  if (names.empty()) return {all.begin(), all.end()};
  std::vector<T> out;
  try {
    for (const auto& n : names) out.push_back(parse(n));
  } catch (const so::InvalidInput& e) {
    throw so::ConfigError(flag, e.what());
  }
  return out;
}

so::TestConfig test_config(const Options& o, bool dependent) {
  so::TestConfig t;
  t.alpha = o.alpha;
  t.num_comparisons = o.comparisons;
  if (o.permutations > 0) t.method = so::Permutation{o.permutations, o.seed};
  t.dependent_samples = dependent;
  try {
    (void)t.adjusted_level();
  } catch (const so::InvalidInput& e) {
    throw so::ConfigError("--alpha/--comparisons", e.what());
  }
  return t;
}

so::DispersionConfig dispersion_config(const Options& o, const std::string& metric) {
  so::DispersionConfig d;
  d.metric = so::parse_metric(metric);
  d.k = o.k;
  d.seed = o.seed;
  d.num_resamples = o.bootstrap;
  d.resampling = so::parse_resampling(o.resampling);
  if (o.normalize == "true") {
    d.normalize = true;
  } else if (o.normalize == "false") {
    d.normalize = false;
  }
  return d;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

int cmd_simulate(const Options& o) {
  const so::ModelConfig cfg = load_config(o);
  const auto scenarios = select<so::heat::ScenarioId>("--scenarios", o.scenarios, so::heat::parse_scenario, so::heat::kAllScenarios);
  const auto designs = select<so::heat::Design>("--designs", o.designs, so::heat::parse_design, so::heat::kAllDesigns);
  const auto factorial = so::enumerate_factorial(so::default_factors());

  so::ExperimentDataset ds = so::run_experiment(designs, scenarios, factorial, cfg);
  ds.metadata.timestamp = utc_timestamp();

  std::error_code ec;
  fs::create_directories(o.out_dir, ec);
  if (ec) throw so::IoError(o.out_dir, "cannot create output directory");
  const std::string path = (fs::path(o.out_dir) / "dataset.csv").string();
  so::write_dataset(ds, path);
  std::cout << "wrote " << ds.rows.size() << " rows to " << path << " (config " << ds.metadata.config_hash << ")\n";
  return kOk;
}

void print_table(const so::PairwiseTable& t) {
  std::cout << "\n" << so::to_string(t.output) << " by " << so::to_string(t.axis) << " (contexts:";
  for (const auto& c : t.contexts) std::cout << " " << c;
  std::cout << ")\n";
  for (std::size_t r = 0; r < t.labels.size(); ++r) {
    for (std::size_t c = 0; c < t.labels.size(); ++c) {
      if (r == c) continue;
      std::cout << "  " << t.labels[r] << " vs " << t.labels[c] << ": ks " << so::format_ks_triple(t, r, c)
                << "  p " << so::format_p_triple(t, r, c) << "\n";
    }
  }
}

int cmd_analyze(const Options& o) {
  const so::ModelConfig cfg = load_config(o);
  const std::string dataset = o.dataset.empty() ? (fs::path(o.out_dir) / "dataset.csv").string() : o.dataset;
  const so::ExperimentDataset ds = so::read_dataset(dataset);
  const std::string hash = so::config_hash(cfg);
  if (ds.metadata.config_hash != hash)
    throw so::StaleDataError("dataset " + dataset + " was produced with config " + ds.metadata.config_hash +
                             ", current config is " + hash + "; rerun simulate");

  const auto res = so::analyze_dataset(ds, test_config(o, true), dispersion_config(o, o.metric), o.out_dir);
  for (const auto& t : res.tables) print_table(t);
  std::cout << "\nadjusted alpha " << so::bonferroni_level(o.alpha, o.comparisons) << "; wrote "
            << (fs::path(o.out_dir) / "report.json").string() << " and " << res.curves.size() << " curve files\n";
  return kOk;
}

std::vector<std::vector<double>> read_numeric_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw so::IoError(path, "cannot open sample file");
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    bool numeric = true;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) {
      const auto b = f.find_first_not_of(" \t");
      const auto e = f.find_last_not_of(" \t");
      f = b == std::string::npos ? "" : f.substr(b, e - b + 1);
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (rows.empty()) continue;  // header line
      throw so::InvalidInput(path + ":" + std::to_string(lineno) + ": non-numeric field");
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw so::InvalidInput(path + ":" + std::to_string(lineno) + ": inconsistent column count");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw so::InvalidInput(path + ": empty sample");
  return rows;
}

so::MultiSample to_multisample(const std::vector<std::vector<double>>& rows) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return so::MultiSample(std::move(m));
}

void print_result(const so::DominanceVerdict& v, const so::KsResult& ks, const so::TestConfig& t) {
  std::cout << "verdict: " << so::to_string(v.relation) << " (" << v.note << ")\n"
            << "D: " << ks.d_two_sided << "\n"
            << "D-: " << ks.d_minus << "\n";
  if (ks.p_value) {
    std::cout << "p: " << *ks.p_value << " (H0: right dominates left; adjusted alpha " << t.adjusted_level()
              << ", " << (ks.rejected.value_or(false) ? "rejected" : "not rejected") << ")\n";
  }
}

int cmd_compare(const Options& o) {
  const auto a = read_numeric_csv(o.sample_a);
  const auto b = read_numeric_csv(o.sample_b);
  const so::TestConfig test = test_config(o, false);

  if (o.dispersion.empty()) {
    if (a.front().size() != 1 || b.front().size() != 1)
      throw so::ConfigError("--dispersion", "multi-column sample files need --dispersion l1|l2|simplex");
    std::vector<double> va;
    std::vector<double> vb;
    for (const auto& r : a) va.push_back(r[0]);
    for (const auto& r : b) vb.push_back(r[0]);
    const so::Sample sa(std::move(va), o.sample_a);
    const so::Sample sb(std::move(vb), o.sample_b);
    print_result(so::fsd_compare(sa, sb), so::ks_one_sided_test(sa, sb, test), test);
    return kOk;
  }

  const auto cmp = so::dispersion_compare(to_multisample(a), to_multisample(b), dispersion_config(o, o.dispersion), test);
  std::cout << "statistic: " << so::to_string(cmp.a.config.metric) << " (" << cmp.a.values.size() << " vs "
            << cmp.b.values.size() << " values; LEFT_DOMINATES means the left sample is more dispersed)\n";
  if (cmp.a.normalization_warning || cmp.b.normalization_warning)
    std::cerr << "warning: constant coordinate mapped to 0 during normalization\n";
  print_result(cmp.verdict, cmp.ks, test);
  return kOk;
}

void add_config_flags(CLI::App* app, Options& o) {
  app->add_option("--config", o.config_path, "YAML model config (built-in defaults when omitted)");
  app->add_option("--set", o.overrides, "Override a config key, e.g. --set scenarios.green.carbon_penalty_eur_per_mton=80");
}

void add_test_flags(CLI::App* app, Options& o) {
  app->add_option("--alpha", o.alpha, "Family-wise significance level")->capture_default_str();
  app->add_option("--comparisons", o.comparisons, "Number of simultaneous tests for the Bonferroni correction")
      ->capture_default_str();
  app->add_option("--permutations", o.permutations, "Use a permutation p-value with this many relabelings (>= 100)");
  app->add_option("--seed", o.seed, "Seed for resampling and permutations")->capture_default_str();
}

void add_dispersion_flags(CLI::App* app, Options& o) {
  app->add_option("--bootstrap", o.bootstrap, "Bootstrap resamples per dispersion sample")->capture_default_str();
  app->add_option("--k", o.k, "Simplex dimension")->capture_default_str();
  app->add_option("--normalize", o.normalize, "Rescale coordinates to [0,1] before resampling")
      ->check(CLI::IsMember({"auto", "true", "false"}))
      ->capture_default_str();
  app->add_option("--resampling", o.resampling, "Tuple resampling scheme")
      ->check(CLI::IsMember({"auto", "bootstrap", "exhaustive"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic-ordering analysis of design options under uncertainty"};
  app.require_subcommand(1);
  Options o;

  auto* sim = app.add_subcommand("simulate", "Run the full factorial experiment and write dataset.csv");
  add_config_flags(sim, o);
  sim->add_option("--out", o.out_dir, "Output directory")->capture_default_str();
  sim->add_option("--scenarios", o.scenarios, "Subset of green, neutral, market")->delimiter(',');
  sim->add_option("--designs", o.designs, "Subset of d1, d2, d3")->delimiter(',');

  auto* ana = app.add_subcommand("analyze", "Build dominance and dispersion tables from a dataset");
  add_config_flags(ana, o);
  ana->add_option("--out", o.out_dir, "Output directory for report.json and curve files")->capture_default_str();
  ana->add_option("--dataset", o.dataset, "Dataset CSV (default <out>/dataset.csv)");
  ana->add_option("--metric", o.metric, "Dispersion statistic")
      ->check(CLI::IsMember({"l1", "l2", "simplex"}))
      ->capture_default_str();
  add_test_flags(ana, o);
  add_dispersion_flags(ana, o);

  auto* cmp = app.add_subcommand("compare", "Compare two sample CSV files");
  cmp->add_option("left", o.sample_a, "Left sample file")->required();
  cmp->add_option("right", o.sample_b, "Right sample file")->required();
  cmp->add_option("--dispersion", o.dispersion, "Compare dispersion with this statistic instead of the values")
      ->check(CLI::IsMember({"l1", "l2", "simplex"}));
  add_test_flags(cmp, o);
  add_dispersion_flags(cmp, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*sim) return cmd_simulate(o);
    if (*ana) return cmd_analyze(o);
    return cmd_compare(o);
  } catch (const so::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kConfig;
  } catch (const so::StaleDataError& e) {
    std::cerr << "stale data: " << e.what() << "\n";
    return kStale;
  } catch (const so::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidData;
  }
}

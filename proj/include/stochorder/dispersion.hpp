#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <type_traits>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stochorder/errors.hpp"
#include "stochorder/geometry.hpp"
#include "stochorder/ordering.hpp"
#include "stochorder/parallel.hpp"
#include "stochorder/rng.hpp"
#include "stochorder/sample.hpp"

namespace stochorder {

// n points in d dimensions, one point per row.
template <typename Scalar>
class BasicMultiSample {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  BasicMultiSample(Matrix points, std::vector<std::string> labels = {})
      : points_(std::move(points)), labels_(std::move(labels)) {
    if (points_.cols() < 1) throw InvalidInput("multisample dimension must be >= 1");
    if (points_.rows() < 2) throw InvalidInput("multisample needs at least 2 points");
    if (!points_.allFinite()) throw InvalidInput("non-finite input");
    if (labels_.empty()) {
      for (Eigen::Index j = 0; j < points_.cols(); ++j) labels_.push_back("x" + std::to_string(j + 1));
    }
    if (static_cast<Eigen::Index>(labels_.size()) != points_.cols())
      throw InvalidInput("label count does not match dimension");
  }

  const Matrix& points() const noexcept { return points_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  Eigen::Index size() const noexcept { return points_.rows(); }
  Eigen::Index dim() const noexcept { return points_.cols(); }

 private:
  Matrix points_;
  std::vector<std::string> labels_;
};

using MultiSample = BasicMultiSample<double>;

enum class Metric { L1, L2, Simplex };

std::string_view to_string(Metric m);
Metric parse_metric(std::string_view name);

// How the two sides of dispersion_compare draw their resample tuples.
// Shared: both sides use the same derived stream, so with equal n the i-th
// resample picks the same row indices on both sides.
enum class SeedPairing { Shared, Independent };

// Bootstrap: num_resamples tuples drawn uniformly with replacement.
// Exhaustive: every one of the n^(k+1) ordered tuples exactly once, i.e. the
// distribution the bootstrap converges to as num_resamples grows.
// Auto: Exhaustive when n^(tuple size) <= exhaustive_limit, else Bootstrap.
enum class Resampling { Bootstrap, Exhaustive, Auto };

std::string_view to_string(Resampling r);
Resampling parse_resampling(std::string_view name);

struct DispersionConfig {
  Metric metric = Metric::Simplex;
  int k = 2;
  std::size_t num_resamples = 1000;
  std::uint64_t seed = 20240101;
  // Unset means the metric's default: on for L1/L2, off for Simplex.
  std::optional<bool> normalize;
  SeedPairing pairing = SeedPairing::Shared;
  Resampling resampling = Resampling::Bootstrap;
  std::uint64_t exhaustive_limit = std::uint64_t{1} << 22;

  bool normalize_effective() const { return normalize.value_or(metric != Metric::Simplex); }
  // Points drawn per resample.
  int tuple_size() const { return metric == Metric::Simplex ? k + 1 : 2; }
  // Number of ordered tuples over n points, saturating at UINT64_MAX.
  std::uint64_t tuple_count(std::uint64_t n) const;
  bool exhaustive_for(std::uint64_t n) const;
};

template <typename Scalar>
struct Normalized {
  BasicMultiSample<Scalar> data;
  std::vector<Eigen::Index> constant_columns;
  bool warning() const { return !constant_columns.empty(); }
};

// Per-coordinate affine map onto [0, 1]. Constant coordinates map to 0 and
// are reported in constant_columns.
template <typename Scalar>
Normalized<Scalar> normalize_unit_range(const BasicMultiSample<Scalar>& data) {
  typename BasicMultiSample<Scalar>::Matrix out = data.points();
  std::vector<Eigen::Index> constant;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    const Scalar lo = out.col(j).minCoeff();
    const Scalar hi = out.col(j).maxCoeff();
    if (hi == lo) {
      out.col(j).setZero();
      constant.push_back(j);
    } else {
      out.col(j) = (out.col(j).array() - lo) / (hi - lo);
    }
  }
  return {BasicMultiSample<Scalar>(std::move(out), data.labels()), std::move(constant)};
}

struct DispersionSample {
  Sample values;
  DispersionConfig config;
  bool normalization_warning = false;
};

namespace detail {

void validate_dispersion(Eigen::Index n, Eigen::Index d, const DispersionConfig& cfg);

template <typename Tuple>
double tuple_statistic(const Tuple& tuple, const DispersionConfig& cfg) {
  switch (cfg.metric) {
    case Metric::L1:
      return static_cast<double>(l1_distance(tuple.row(0), tuple.row(1)));
    case Metric::L2:
      return static_cast<double>(l2_distance(tuple.row(0), tuple.row(1)));
    case Metric::Simplex:
      return static_cast<double>(simplex_volume(tuple));
  }
  return 0.0;
}

// Fills out[i] = statistic of the tuple whose row indices pick(i, rows) writes.
template <typename Scalar, typename Pick>
void fill_statistics(const typename BasicMultiSample<Scalar>::Matrix& pts, const DispersionConfig& cfg,
                     std::vector<double>& out, Pick pick) {
  constexpr int kMaxDim = 8;
  const int t = cfg.tuple_size();
  const Eigen::Index d = pts.cols();
  auto run = [&]<typename Tuple>(std::type_identity<Tuple>) {
    parallel_for(out.size(), [&](std::size_t i) {
      Tuple tuple(t, d);
      std::array<Eigen::Index, kMaxDim + 1> rows{};
      std::vector<Eigen::Index> big;
      Eigen::Index* idx = rows.data();
      if (t > kMaxDim + 1) {
        big.resize(static_cast<std::size_t>(t));
        idx = big.data();
      }
      pick(i, idx);
      for (int r = 0; r < t; ++r) tuple.row(r) = pts.row(idx[r]);
      out[i] = tuple_statistic(tuple, cfg);
    });
  };
  if (d <= kMaxDim && t <= kMaxDim + 1) {
    run(std::type_identity<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor, kMaxDim + 1,
                                         kMaxDim>>{});
  } else {
    run(std::type_identity<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>{});
  }
}

}  // namespace detail

// Empirical distribution of the dispersion statistic over tuples of rows of
// `data`. Bootstrap resample b is seeded by derive_seed(seed, b). For Simplex
// the recorded statistic is the volume, not its square.
template <typename Scalar>
DispersionSample dispersion_sample(const BasicMultiSample<Scalar>& data, const DispersionConfig& cfg) {
  detail::validate_dispersion(data.size(), data.dim(), cfg);

  bool warning = false;
  typename BasicMultiSample<Scalar>::Matrix pts;
  if (cfg.normalize_effective()) {
    auto normed = normalize_unit_range(data);
    warning = normed.warning();
    pts = normed.data.points();
  } else {
    pts = data.points();
  }

  const auto n = static_cast<std::uint64_t>(pts.rows());
  const int t = cfg.tuple_size();
  std::vector<double> stats;
  if (cfg.exhaustive_for(n)) {
    stats.resize(cfg.tuple_count(n));
    detail::fill_statistics<Scalar>(pts, cfg, stats, [&](std::size_t i, Eigen::Index* rows) {
      std::uint64_t code = i;
      for (int r = t - 1; r >= 0; --r) {
        rows[r] = static_cast<Eigen::Index>(code % n);
        code /= n;
      }
    });
  } else {
    stats.resize(cfg.num_resamples);
    detail::fill_statistics<Scalar>(pts, cfg, stats, [&](std::size_t b, Eigen::Index* rows) {
      SplitMix64 rng(derive_seed(cfg.seed, b));
      for (int r = 0; r < t; ++r) rows[r] = static_cast<Eigen::Index>(rng.below(n));
    });
  }
  return {Sample(std::move(stats), std::string(to_string(cfg.metric))), cfg, warning};
}

struct DispersionComparison {
  DominanceVerdict verdict;
  KsResult ks;
  DispersionSample a;
  DispersionSample b;
};

// Seeds used for the two sides of a comparison.
std::pair<std::uint64_t, std::uint64_t> side_seeds(const DispersionConfig& cfg);

// LeftDominates means a's statistic is stochastically larger: a is more
// dispersed than b. The test treats H0 as "b's statistic dominates a's".
template <typename Scalar>
DispersionComparison dispersion_compare(const BasicMultiSample<Scalar>& a, const BasicMultiSample<Scalar>& b,
                                        const DispersionConfig& cfg, const TestConfig& test) {
  if (a.dim() != b.dim()) throw InvalidInput("dimension mismatch");
  const auto [seed_a, seed_b] = side_seeds(cfg);
  DispersionConfig cfg_a = cfg;
  cfg_a.seed = seed_a;
  DispersionConfig cfg_b = cfg;
  cfg_b.seed = seed_b;
  DispersionSample sa = dispersion_sample(a, cfg_a);
  DispersionSample sb = dispersion_sample(b, cfg_b);
  DominanceVerdict verdict = fsd_compare(sa.values, sb.values);
  KsResult ks = ks_one_sided_test(sa.values, sb.values, test);
  return {std::move(verdict), ks, std::move(sa), std::move(sb)};
}

template <typename Scalar>
DispersionComparison dispersion_compare(const BasicMultiSample<Scalar>& a, const BasicMultiSample<Scalar>& b,
                                        const DispersionConfig& cfg) {
  return dispersion_compare(a, b, cfg, TestConfig{});
}

}  // namespace stochorder

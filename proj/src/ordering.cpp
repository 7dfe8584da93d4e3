#include "stochorder/ordering.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "stochorder/errors.hpp"
#include "stochorder/parallel.hpp"
#include "stochorder/rng.hpp"

namespace stochorder {

namespace {

// Walks the pooled, tolerance-merged support of two sorted samples and calls
// f(i, j) at each pooled point, where i and j are the numbers of x and y
// observations <= that point. F_x = i/n and F_y = j/m there.
template <typename F>
void for_each_pooled_point(std::span<const double> x, std::span<const double> y, F&& f) {
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < x.size() || j < y.size()) {
    double last;
    if (j == y.size() || (i < x.size() && x[i] <= y[j])) {
      last = x[i++];
    } else {
      last = y[j++];
    }
    bool advanced = true;
    while (advanced) {
      advanced = false;
      while (i < x.size() && merges_into(last, x[i])) {
        last = std::max(last, x[i++]);
        advanced = true;
      }
      while (j < y.size() && merges_into(last, y[j])) {
        last = std::max(last, y[j++]);
        advanced = true;
      }
    }
    f(i, j);
  }
}

struct StepStats {
  // Largest (j*n - i*m) and (i*m - j*n) over pooled points, clamped at 0.
  std::int64_t max_y_above = 0;
  std::int64_t max_x_above = 0;
};

StepStats step_stats(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<std::int64_t>(x.size());
  const auto m = static_cast<std::int64_t>(y.size());
  StepStats s;
  for_each_pooled_point(x, y, [&](std::size_t i, std::size_t j) {
    const std::int64_t diff = static_cast<std::int64_t>(j) * n - static_cast<std::int64_t>(i) * m;
    s.max_y_above = std::max(s.max_y_above, diff);
    s.max_x_above = std::max(s.max_x_above, -diff);
  });
  return s;
}

double to_probability(std::int64_t numerator, std::size_t n, std::size_t m) {
  return static_cast<double>(numerator) / (static_cast<double>(n) * static_cast<double>(m));
}

}  // namespace

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::LeftDominates:
      return "LEFT_DOMINATES";
    case Relation::RightDominates:
      return "RIGHT_DOMINATES";
    case Relation::Equal:
      return "EQUAL";
    case Relation::Incomparable:
      return "INCOMPARABLE";
  }
  return "?";
}

double bonferroni_level(double alpha, int num_comparisons) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("alpha must lie in (0, 1)");
  if (num_comparisons < 1) throw InvalidInput("number of comparisons must be >= 1");
  return alpha / num_comparisons;
}

double TestConfig::adjusted_level() const { return bonferroni_level(alpha, num_comparisons); }

double ks_distance(const Sample& x, const Sample& y) {
  const StepStats s = step_stats(x.values(), y.values());
  return to_probability(std::max(s.max_x_above, s.max_y_above), x.size(), y.size());
}

double d_minus(const Sample& x, const Sample& y) {
  return to_probability(step_stats(x.values(), y.values()).max_y_above, x.size(), y.size());
}

DominanceVerdict fsd_compare(const Sample& x, const Sample& y) {
  const StepStats s = step_stats(x.values(), y.values());
  const bool x_below = s.max_y_above > 0;  // F_x < F_y somewhere
  const bool y_below = s.max_x_above > 0;  // F_y < F_x somewhere
  if (!x_below && !y_below) return {Relation::Equal, "identical empirical cdfs"};
  if (x_below && !y_below) return {Relation::LeftDominates, "left cdf lies below right cdf"};
  if (y_below && !x_below) return {Relation::RightDominates, "right cdf lies below left cdf"};
  return {Relation::Incomparable, "cdfs cross"};
}

KsResult ks_statistics(const Sample& x, const Sample& y) {
  const StepStats s = step_stats(x.values(), y.values());
  KsResult r;
  r.n = x.size();
  r.m = y.size();
  r.d_minus = to_probability(s.max_y_above, r.n, r.m);
  r.d_two_sided = to_probability(std::max(s.max_x_above, s.max_y_above), r.n, r.m);
  return r;
}

double asymptotic_one_sided_p(double d_minus, std::size_t n, std::size_t m) {
  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(m);
  return std::exp(-2.0 * d_minus * d_minus * nd * md / (nd + md));
}

namespace {

double permutation_p(const Sample& x, const Sample& y, std::int64_t observed, const Permutation& perm) {
  if (perm.num_permutations < 100) throw InvalidInput("insufficient permutations");
  std::vector<double> pooled(x.values().begin(), x.values().end());
  pooled.insert(pooled.end(), y.values().begin(), y.values().end());
  const std::size_t n = x.size();

  std::vector<std::uint8_t> hit(perm.num_permutations, 0);
  parallel_for(perm.num_permutations, [&](std::size_t b) {
    std::vector<double> shuffled = pooled;
    SplitMix64 rng(derive_seed(perm.seed, b));
    for (std::size_t i = shuffled.size() - 1; i > 0; --i) {
      std::swap(shuffled[i], shuffled[rng.below(i + 1)]);
    }
    const auto mid = shuffled.begin() + static_cast<std::ptrdiff_t>(n);
    std::sort(shuffled.begin(), mid);
    std::sort(mid, shuffled.end());
    const std::span<const double> all(shuffled);
    hit[b] = step_stats(all.first(n), all.subspan(n)).max_y_above >= observed ? 1 : 0;
  });
  std::size_t count = 0;
  for (auto h : hit) count += h;
  return static_cast<double>(count + 1) / static_cast<double>(perm.num_permutations + 1);
}

}  // namespace

KsResult ks_one_sided_test(const Sample& x, const Sample& y, const TestConfig& cfg) {
  const double level = cfg.adjusted_level();
  const StepStats s = step_stats(x.values(), y.values());
  KsResult r;
  r.n = x.size();
  r.m = y.size();
  r.d_minus = to_probability(s.max_y_above, r.n, r.m);
  r.d_two_sided = to_probability(std::max(s.max_x_above, s.max_y_above), r.n, r.m);
  r.dependent_samples = cfg.dependent_samples;

  if (const auto* perm = std::get_if<Permutation>(&cfg.method)) {
    r.p_value = permutation_p(x, y, s.max_y_above, *perm);
  } else {
    r.p_value = asymptotic_one_sided_p(r.d_minus, r.n, r.m);
  }
  r.rejected = *r.p_value <= level;
  return r;
}

}  // namespace stochorder

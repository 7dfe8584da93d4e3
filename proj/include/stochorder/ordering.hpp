#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "stochorder/sample.hpp"

namespace stochorder {

// Outcome of a first-order comparison fsd_compare(left, right).
// LeftDominates: F_left <= F_right everywhere, strictly somewhere, i.e. the
// left sample is stochastically larger.
enum class Relation { LeftDominates, RightDominates, Equal, Incomparable };

std::string_view to_string(Relation r);

struct DominanceVerdict {
  Relation relation = Relation::Equal;
  std::string note;
};

struct KsResult {
  double d_two_sided = 0.0;
  double d_minus = 0.0;
  std::optional<double> p_value;
  std::optional<bool> rejected;
  std::size_t n = 0;
  std::size_t m = 0;
  // Set when both samples come from a shared input design, so the
  // independence assumption behind the p-value does not hold.
  bool dependent_samples = false;
};

struct Asymptotic {};

struct Permutation {
  std::size_t num_permutations = 10000;
  std::uint64_t seed = 0;
};

using PValueMethod = std::variant<Asymptotic, Permutation>;

struct TestConfig {
  double alpha = 0.05;
  int num_comparisons = 1;
  PValueMethod method = Asymptotic{};
  bool dependent_samples = false;

  double adjusted_level() const;
};

double bonferroni_level(double alpha, int num_comparisons);

// sup_t |F_x(t) - F_y(t)|, exact over the pooled support.
double ks_distance(const Sample& x, const Sample& y);

// sup_t (F_y(t) - F_x(t)), clamped at 0.
double d_minus(const Sample& x, const Sample& y);

DominanceVerdict fsd_compare(const Sample& x, const Sample& y);

// Both statistics without a p-value.
KsResult ks_statistics(const Sample& x, const Sample& y);

// One-sided test of H0: y first-order dominates x (F_x >= F_y everywhere).
// Large D- is evidence against H0.
KsResult ks_one_sided_test(const Sample& x, const Sample& y, const TestConfig& cfg);

double asymptotic_one_sided_p(double d_minus, std::size_t n, std::size_t m);

}  // namespace stochorder

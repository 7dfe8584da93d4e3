#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace stochorder {

// Relative tolerance used when merging nearly equal observations into one
// support point. Relative so that rescaling every value by a positive factor
// never changes which observations share a point.
inline constexpr double kSupportMergeTolerance = 1e-12;

// True when `next` (>= `last`) belongs to the support point ending at `last`.
inline bool merges_into(double last, double next) noexcept {
  const double mag = std::max(std::abs(last), std::abs(next));
  return next - last <= kSupportMergeTolerance * mag;
}

// Univariate empirical output data. Values are kept sorted ascending.
class Sample {
 public:
  Sample(std::vector<double> values, std::string label = {});

  std::span<const double> values() const noexcept { return values_; }
  const std::string& label() const noexcept { return label_; }
  std::size_t size() const noexcept { return values_.size(); }

  double mean() const;
  double median() const;

 private:
  std::vector<double> values_;
  std::string label_;
};

// Right-continuous step function. counts[i] is the number of observations
// <= support[i]; probs[i] == counts[i] / n.
struct EmpiricalCdf {
  std::vector<double> support;
  std::vector<double> probs;
  std::vector<std::size_t> counts;
  std::size_t n = 0;
};

EmpiricalCdf build_ecdf(const Sample& sample);

// P(X <= t); zero below the smallest support point.
double ecdf_eval(const EmpiricalCdf& cdf, double t);

}  // namespace stochorder

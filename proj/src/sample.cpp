#include "stochorder/sample.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stochorder/errors.hpp"

namespace stochorder {

Sample::Sample(std::vector<double> values, std::string label) : values_(std::move(values)), label_(std::move(label)) {
  if (values_.empty()) throw InvalidInput("empty sample");
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidInput("non-finite input");
  }
  std::stable_sort(values_.begin(), values_.end());
}

double Sample::mean() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
}

double Sample::median() const {
  const std::size_t n = values_.size();
  if (n % 2 == 1) return values_[n / 2];
  return 0.5 * (values_[n / 2 - 1] + values_[n / 2]);
}

EmpiricalCdf build_ecdf(const Sample& sample) {
  const auto v = sample.values();
  EmpiricalCdf cdf;
  cdf.n = v.size();
  std::size_t i = 0;
  while (i < v.size()) {
    const double start = v[i];
    double last = v[i];
    ++i;
    while (i < v.size() && merges_into(last, v[i])) last = v[i++];
    cdf.support.push_back(start);
    cdf.counts.push_back(i);
  }
  cdf.probs.reserve(cdf.counts.size());
  for (std::size_t c : cdf.counts) {
    cdf.probs.push_back(static_cast<double>(c) / static_cast<double>(cdf.n));
  }
  return cdf;
}

double ecdf_eval(const EmpiricalCdf& cdf, double t) {
  const auto it = std::upper_bound(cdf.support.begin(), cdf.support.end(), t);
  if (it == cdf.support.begin()) return 0.0;
  return cdf.probs[static_cast<std::size_t>(it - cdf.support.begin()) - 1];
}

}  // namespace stochorder

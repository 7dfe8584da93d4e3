#include "stochorder/dispersion.hpp"

namespace stochorder {

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::L1:
      return "l1";
    case Metric::L2:
      return "l2";
    case Metric::Simplex:
      return "simplex";
  }
  return "?";
}

Metric parse_metric(std::string_view name) {
  if (name == "l1" || name == "L1") return Metric::L1;
  if (name == "l2" || name == "L2") return Metric::L2;
  if (name == "simplex" || name == "SIMPLEX") return Metric::Simplex;
  throw InvalidInput("unknown metric '" + std::string(name) + "'");
}

std::string_view to_string(Resampling r) {
  switch (r) {
    case Resampling::Bootstrap:
      return "bootstrap";
    case Resampling::Exhaustive:
      return "exhaustive";
    case Resampling::Auto:
      return "auto";
  }
  return "?";
}

Resampling parse_resampling(std::string_view name) {
  if (name == "bootstrap") return Resampling::Bootstrap;
  if (name == "exhaustive") return Resampling::Exhaustive;
  if (name == "auto") return Resampling::Auto;
  throw InvalidInput("unknown resampling scheme '" + std::string(name) + "'");
}

std::uint64_t DispersionConfig::tuple_count(std::uint64_t n) const {
  std::uint64_t total = 1;
  for (int i = 0; i < tuple_size(); ++i) {
    if (n != 0 && total > UINT64_MAX / n) return UINT64_MAX;
    total *= n;
  }
  return total;
}

bool DispersionConfig::exhaustive_for(std::uint64_t n) const {
  switch (resampling) {
    case Resampling::Bootstrap:
      return false;
    case Resampling::Exhaustive:
      return true;
    case Resampling::Auto:
      return tuple_count(n) <= exhaustive_limit;
  }
  return false;
}

namespace detail {

void validate_dispersion(Eigen::Index n, Eigen::Index d, const DispersionConfig& cfg) {
  if (cfg.metric == Metric::Simplex) {
    if (cfg.k < 1) throw InvalidInput("simplex order k must be >= 1");
    if (cfg.k > d) throw InvalidInput("simplex order k exceeds dimension d");
    if (n < cfg.k + 1) throw InvalidInput("insufficient points for simplex resampling");
  } else if (n < 2) {
    throw InvalidInput("insufficient points for distance resampling");
  }
  if (cfg.num_resamples < 100) throw InvalidInput("num_resamples must be >= 100");
  if (cfg.resampling == Resampling::Exhaustive && cfg.tuple_count(static_cast<std::uint64_t>(n)) > (std::uint64_t{1} << 32))
    throw InvalidInput("too many tuples for exhaustive resampling");
}

}  // namespace detail

std::pair<std::uint64_t, std::uint64_t> side_seeds(const DispersionConfig& cfg) {
  if (cfg.pairing == SeedPairing::Shared) {
    const std::uint64_t s = derive_seed(cfg.seed, 0);
    return {s, s};
  }
  return {derive_seed(cfg.seed, 1), derive_seed(cfg.seed, 2)};
}

}  // namespace stochorder

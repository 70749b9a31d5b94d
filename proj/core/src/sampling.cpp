#include "gridsweep/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

namespace gridsweep {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Unbiased draw in [0, n) by rejection; avoids std::uniform_int_distribution,
// whose output is not specified across standard libraries.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t threshold = (0ULL - n) % n;  // 2^64 mod n
  std::uint64_t x = rng();
  while (x < threshold) x = rng();
  return x % n;
}

}  // namespace

void validate(const SubsamplePlan& plan) {
  if (!(plan.keep_rate > 0.0) || plan.keep_rate > 1.0) {
    throw InvalidArgumentError("keep_rate must be in (0, 1]");
  }
  if (plan.n_subsamples < 1) {
    throw InvalidArgumentError("n_subsamples must be >= 1");
  }
}

std::int64_t retained_negative_count(double keep_rate, std::int64_t n_negatives) {
  if (!(keep_rate > 0.0) || keep_rate > 1.0) {
    throw InvalidArgumentError("keep_rate must be in (0, 1]");
  }
  if (n_negatives < 0) throw InvalidArgumentError("negative pool size");
  // round half up
  return static_cast<std::int64_t>(
      std::floor(keep_rate * static_cast<double>(n_negatives) + 0.5));
}

GridPanel subsample(const GridPanel& panel, double keep_rate, std::uint64_t seed) {
  if (!(keep_rate > 0.0) || keep_rate > 1.0) {
    throw InvalidArgumentError("keep_rate must be in (0, 1]");
  }
  const auto outcome = panel.outcome_index();
  if (!outcome) {
    throw ConfigError("panel has no outcome variable; cannot subsample");
  }

  std::vector<std::size_t> negatives;
  std::vector<bool> keep(panel.size(), false);
  for (std::size_t r = 0; r < panel.size(); ++r) {
    const double y = panel.value(r, *outcome);
    if (is_missing(y)) continue;  // dropped before sampling
    if (y == 1.0) {
      keep[r] = true;
    } else {
      negatives.push_back(r);
    }
  }

  const auto n_keep = static_cast<std::size_t>(
      retained_negative_count(keep_rate, static_cast<std::int64_t>(negatives.size())));

  // Partial Fisher-Yates: the first n_keep slots end up holding a uniform
  // draw without replacement.
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < n_keep; ++i) {
    const std::uint64_t span = negatives.size() - i;
    const std::size_t j = i + static_cast<std::size_t>(bounded(rng, span));
    std::swap(negatives[i], negatives[j]);
  }
  for (std::size_t i = 0; i < n_keep; ++i) keep[negatives[i]] = true;

  std::vector<GridPanel::Record> records;
  for (std::size_t r = 0; r < panel.size(); ++r) {
    if (!keep[r]) continue;
    const auto vals = panel.values(r);
    records.emplace_back(panel.key(r), std::vector<double>(vals.begin(), vals.end()));
  }
  return GridPanel(panel.variables(), panel.base_side_km(), std::move(records));
}

std::uint64_t derive_seed(std::uint64_t base_seed, int k, int s, int m) {
  std::uint64_t h = splitmix64(base_seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(k)));
  h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(s)));
  h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(m)));
  return h;
}

}  // namespace gridsweep

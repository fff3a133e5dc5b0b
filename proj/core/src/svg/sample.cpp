#include "mocr/svg/sample.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "mocr/common/error.hpp"
#include "mocr/common/rng.hpp"

namespace mocr::svg {

namespace {

void validate(const SamplingSpec& spec) {
  if (spec.max_domain_share < 0.0 || spec.max_domain_share > 1.0)
    throw ConfigError("sample: max_domain_share must lie in [0,1]");
  if (spec.strata_proportions.size() != spec.strata_boundaries.size() + 1)
    throw ConfigError("sample: need one proportion per stratum (boundaries + 1)");
  double sum = 0.0;
  for (double p : spec.strata_proportions) {
    if (p < 0.0 || p > 1.0) throw ConfigError("sample: proportions must lie in [0,1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("sample: proportions must sum to 1");
  if (!std::is_sorted(spec.strata_boundaries.begin(), spec.strata_boundaries.end()))
    throw ConfigError("sample: strata boundaries must be ascending");
}

std::size_t stratum_of(double path_commands, const std::vector<double>& boundaries) {
  for (std::size_t i = 0; i < boundaries.size(); ++i)
    if (path_commands <= boundaries[i]) return i;
  return boundaries.size();
}

// Largest-remainder apportionment of `total` across `proportions`; ties go to
// the lower index.
std::vector<std::size_t> apportion(std::size_t total, const std::vector<double>& proportions) {
  const std::size_t k = proportions.size();
  std::vector<std::size_t> result(k);
  std::vector<std::pair<double, std::size_t>> remainders(k);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double quota = static_cast<double>(total) * proportions[i];
    result[i] = static_cast<std::size_t>(quota);
    remainders[i] = {quota - static_cast<double>(result[i]), i};
    assigned += result[i];
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < total; ++i, ++assigned) result[remainders[i % k].second]++;
  return result;
}

}  // namespace

SampleResult sample(std::span<const SvgAsset> assets, const SamplingSpec& spec) {
  validate(spec);
  if (assets.empty()) throw Error("sample: empty asset pool");
  {
    std::unordered_set<std::string_view> ids;
    for (const SvgAsset& asset : assets)
      if (!ids.insert(asset.id).second)
        throw std::invalid_argument("sample: duplicate asset id '" + asset.id + "'");
  }

  const std::size_t stratum_count = spec.strata_proportions.size();
  std::vector<std::vector<const SvgAsset*>> strata(stratum_count);
  for (const SvgAsset& asset : assets)
    strata[stratum_of(static_cast<double>(asset.metrics.path_command_count),
                      spec.strata_boundaries)]
        .push_back(&asset);

  SampleResult result;
  result.stratum_targets = apportion(spec.target_size, spec.strata_proportions);
  result.stratum_counts.assign(stratum_count, 0);

  const auto domain_cap = static_cast<std::size_t>(
      spec.max_domain_share * static_cast<double>(spec.target_size));
  std::unordered_map<std::string_view, std::size_t> per_domain;

  for (std::size_t s = 0; s < stratum_count; ++s) {
    auto& pool = strata[s];
    std::sort(pool.begin(), pool.end(),
              [](const SvgAsset* a, const SvgAsset* b) { return a->id < b->id; });
    auto engine = rng::make_engine(rng::substream_seed(spec.seed, s));
    rng::fisher_yates(std::span<const SvgAsset*>(pool), engine);
    for (const SvgAsset* asset : pool) {
      if (result.stratum_counts[s] >= result.stratum_targets[s]) break;
      std::size_t& taken = per_domain[asset->domain];
      if (taken >= domain_cap) continue;
      ++taken;
      ++result.stratum_counts[s];
      result.ids.push_back(asset->id);
    }
  }
  result.shortfall = spec.target_size - result.ids.size();
  return result;
}

}  // namespace mocr::svg

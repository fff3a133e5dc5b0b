#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mocr/svg/asset.hpp"

namespace mocr::svg {

/// Stratified sampling plan. Strata are defined over path command count:
/// `strata_boundaries` holds ascending cut points (typically corpus
/// quantiles); stratum i covers counts ≤ boundaries[i], the final stratum is
/// open-ended, so there are boundaries.size() + 1 strata and
/// `strata_proportions` must match that and sum to 1.
struct SamplingSpec {
  double max_domain_share = 1.0;  // cap per domain as a fraction of target_size
  std::vector<double> strata_boundaries;
  std::vector<double> strata_proportions = {1.0};
  std::size_t target_size = 0;
  std::uint64_t seed = 0;
};

struct SampleResult {
  std::vector<std::string> ids;              // selection order: stratum by stratum
  std::vector<std::size_t> stratum_targets;  // largest-remainder apportionment
  std::vector<std::size_t> stratum_counts;   // what each stratum actually yielded
  std::size_t shortfall = 0;                 // target_size minus ids.size()
};

/// Deterministic given the seed and asset set (input order is irrelevant:
/// candidates are sorted by id before the per-stratum shuffle). No domain
/// exceeds floor(max_domain_share * target_size) selections. When a stratum
/// cannot fill its target the deficit is reported as shortfall, never
/// covered from other strata.
SampleResult sample(std::span<const SvgAsset> assets, const SamplingSpec& spec);

}  // namespace mocr::svg

#pragma once

#include <span>
#include <string>
#include <vector>

#include "mocr/svg/asset.hpp"

namespace mocr::svg {

enum class DedupMethod { kCodeLevel, kImageLevel };

struct DedupMerge {
  std::string first;   // asset already in the cluster
  std::string second;  // asset the merge pulled in
  DedupMethod method;
};

struct DedupCluster {
  std::vector<std::string> ids;  // sorted; singletons included
  std::string representative;    // lexicographically smallest id
};

/// Clusters partition the input asset set; `merges` records each edge that
/// united two clusters and the evidence level behind it.
struct DedupReport {
  std::vector<DedupCluster> clusters;
  std::vector<DedupMerge> merges;
  std::vector<std::string> render_failed;  // skipped by the image-level stage
};

/// Stage 1 merges identical fingerprints; stage 2 merges render-ok assets
/// whose perceptual hashes lie within `hamming_threshold` bits (transitive
/// closure). Throws std::invalid_argument on duplicate asset ids.
DedupReport dedup(std::span<const SvgAsset> assets, unsigned hamming_threshold = 6);

}  // namespace mocr::svg

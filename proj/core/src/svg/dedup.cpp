#include "mocr/svg/dedup.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace mocr::svg {

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

DedupReport dedup(std::span<const SvgAsset> assets, unsigned hamming_threshold) {
  const std::size_t n = assets.size();
  std::unordered_set<std::string_view> seen_ids;
  for (const SvgAsset& asset : assets)
    if (!seen_ids.insert(asset.id).second)
      throw std::invalid_argument("dedup: duplicate asset id '" + asset.id + "'");

  UnionFind uf(n);
  DedupReport report;

  std::unordered_map<std::uint64_t, std::size_t> first_with_fingerprint;
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, inserted] = first_with_fingerprint.try_emplace(assets[i].fingerprint, i);
    if (!inserted && uf.unite(it->second, i))
      report.merges.push_back({assets[it->second].id, assets[i].id, DedupMethod::kCodeLevel});
  }

  std::vector<std::size_t> hashed;
  hashed.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (assets[i].render_ok)
      hashed.push_back(i);
    else
      report.render_failed.push_back(assets[i].id);
  }
  for (std::size_t a = 0; a < hashed.size(); ++a) {
    for (std::size_t b = a + 1; b < hashed.size(); ++b) {
      const std::size_t i = hashed[a], j = hashed[b];
      const auto distance =
          static_cast<unsigned>(std::popcount(assets[i].phash ^ assets[j].phash));
      if (distance <= hamming_threshold && uf.unite(i, j))
        report.merges.push_back({assets[i].id, assets[j].id, DedupMethod::kImageLevel});
    }
  }

  std::map<std::size_t, std::vector<std::string>> by_root;
  for (std::size_t i = 0; i < n; ++i) by_root[uf.find(i)].push_back(assets[i].id);
  report.clusters.reserve(by_root.size());
  for (auto& [root, ids] : by_root) {
    std::sort(ids.begin(), ids.end());
    DedupCluster cluster;
    cluster.representative = ids.front();
    cluster.ids = std::move(ids);
    report.clusters.push_back(std::move(cluster));
  }
  std::sort(report.clusters.begin(), report.clusters.end(),
            [](const DedupCluster& a, const DedupCluster& b) {
              return a.representative < b.representative;
            });
  return report;
}

}  // namespace mocr::svg

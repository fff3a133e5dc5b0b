#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mocr/svg/metrics.hpp"

namespace mocr::svg {

/// One corpus entry. canonical_text is a fixed point of canonicalize();
/// fingerprint is recomputable from it. phash is meaningful only when
/// render_ok (render failures keep the asset code-level dedupable).
struct SvgAsset {
  std::string id;
  std::string domain;
  std::string path;  // source file recorded in the manifest
  std::string canonical_text;
  ComplexityMetrics metrics;
  std::uint64_t fingerprint = 0;
  std::uint64_t phash = 0;
  bool render_ok = false;
};

/// 64-bit digest of canonical text, the code-level dedup key.
std::uint64_t fingerprint_of(std::string_view canonical_text);

/// Line-delimited manifest, schema "mocr-svg/1", one JSON record per asset.
/// canonical_text is not persisted; reading restores everything else.
void write_manifest(const std::string& path, std::span<const SvgAsset> assets);
std::vector<SvgAsset> read_manifest(const std::string& path);

std::string manifest_record(const SvgAsset& asset);
SvgAsset parse_manifest_record(std::string_view line, std::size_t line_number);

}  // namespace mocr::svg

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mocr/render/bitmap.hpp"

namespace mocr::render {

/// Composite is always 0.5 * pixel + 0.5 * structural, including the
/// failure case where every component is 0.
struct ScoreBreakdown {
  double pixel = 0.0;
  double structural = 0.0;
  double composite = 0.0;
  bool failed = false;
};

/// 1 - mean |a-b|/255 over RGB after compositing both onto white.
/// Throws std::invalid_argument on dimension mismatch.
double pixel_similarity(const Bitmap& a, const Bitmap& b);

/// Windowed structural similarity on luminance: 8x8 windows, stride 4,
/// C1 = (0.01*255)^2, C2 = (0.03*255)^2, mean over windows, clamped to
/// [0,1]. Images smaller than one window fall back to pixel_similarity.
double structural_similarity(const Bitmap& a, const Bitmap& b);

/// Renders `predicted_svg` at the reference's dimensions and compares.
/// Render failure yields all-zero components with `failed` set; no throw.
ScoreBreakdown reconstruction_score(const Bitmap& reference, std::string_view predicted_svg);

/// Score manifest, schema "mocr-score/1", one JSON record per line.
struct ScoreRecord {
  std::string asset_id;
  ScoreBreakdown score;
};

void write_scores(const std::string& path, std::span<const ScoreRecord> records);
std::vector<ScoreRecord> read_scores(const std::string& path);

}  // namespace mocr::render

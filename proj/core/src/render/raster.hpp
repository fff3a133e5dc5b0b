#pragma once

#include <vector>

#include "geom.hpp"
#include "mocr/render/bitmap.hpp"

namespace mocr::render::detail {

struct Rgba {
  double r = 0.0, g = 0.0, b = 0.0, a = 1.0;  // straight alpha, 0..1
};

struct GradientStop {
  double offset = 0.0;
  Rgba color;
};

// Paint resolved into device space: solid color, or a gradient whose
// geometry lives in gradient space reached through `to_gradient`.
struct DevicePaint {
  enum class Kind { kSolid, kLinear, kRadial } kind = Kind::kSolid;
  Rgba solid;
  std::vector<GradientStop> stops;  // sorted by offset, pad spread
  Mat to_gradient;                  // device point -> gradient space
  Vec2 p1, p2;                      // linear axis
  Vec2 center;                      // radial center
  double radius = 1.0;

  Rgba sample(double x, double y) const;
};

// Fills polygons (device space, every subpath treated as closed) with
// 4x vertical supersampling and exact horizontal span coverage.
// `alpha_scale` multiplies the paint's own alpha (group/fill opacity).
void fill_polygons(Bitmap& bitmap, const std::vector<std::vector<Vec2>>& polygons,
                   bool even_odd, const DevicePaint& paint, double alpha_scale);

}  // namespace mocr::render::detail

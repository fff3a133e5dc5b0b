#include "raster.hpp"

#include <algorithm>
#include <cmath>

namespace mocr::render::detail {

namespace {

constexpr int kSamplesPerRow = 4;

struct Edge {
  double x0, y0, x1, y1;  // y0 < y1 always; winding keeps the direction
  int winding;            // +1 when the original edge pointed down (y grows)
};

struct Crossing {
  double x;
  int winding;
};

Rgba lerp(const Rgba& a, const Rgba& b, double t) {
  return {a.r + (b.r - a.r) * t, a.g + (b.g - a.g) * t, a.b + (b.b - a.b) * t,
          a.a + (b.a - a.a) * t};
}

Rgba sample_stops(const std::vector<GradientStop>& stops, double t) {
  if (stops.empty()) return {0.0, 0.0, 0.0, 1.0};
  if (t <= stops.front().offset) return stops.front().color;
  if (t >= stops.back().offset) return stops.back().color;
  for (std::size_t i = 1; i < stops.size(); ++i) {
    if (t <= stops[i].offset) {
      const double span = stops[i].offset - stops[i - 1].offset;
      const double local = span > 0.0 ? (t - stops[i - 1].offset) / span : 0.0;
      return lerp(stops[i - 1].color, stops[i].color, local);
    }
  }
  return stops.back().color;
}

}  // namespace

Rgba DevicePaint::sample(double x, double y) const {
  if (kind == Kind::kSolid) return solid;
  const Vec2 p = to_gradient.apply({x, y});
  double t;
  if (kind == Kind::kLinear) {
    const double dx = p2.x - p1.x, dy = p2.y - p1.y;
    const double len2 = dx * dx + dy * dy;
    t = len2 > 0.0 ? ((p.x - p1.x) * dx + (p.y - p1.y) * dy) / len2 : 0.0;
  } else {
    const double dx = p.x - center.x, dy = p.y - center.y;
    t = radius > 0.0 ? std::sqrt(dx * dx + dy * dy) / radius : 1.0;
  }
  return sample_stops(stops, std::clamp(t, 0.0, 1.0));
}

void fill_polygons(Bitmap& bitmap, const std::vector<std::vector<Vec2>>& polygons,
                   bool even_odd, const DevicePaint& paint, double alpha_scale) {
  if (alpha_scale <= 0.0) return;

  std::vector<Edge> edges;
  double min_y = 1e300, max_y = -1e300, min_x = 1e300, max_x = -1e300;
  for (const auto& polygon : polygons) {
    const std::size_t n = polygon.size();
    if (n < 3) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2& p = polygon[i];
      const Vec2& q = polygon[(i + 1) % n];
      if (p.y == q.y) continue;
      Edge edge;
      if (p.y < q.y) {
        edge = {p.x, p.y, q.x, q.y, 1};
      } else {
        edge = {q.x, q.y, p.x, p.y, -1};
      }
      edges.push_back(edge);
      min_y = std::min(min_y, edge.y0);
      max_y = std::max(max_y, edge.y1);
      min_x = std::min({min_x, edge.x0, edge.x1});
      max_x = std::max({max_x, edge.x0, edge.x1});
    }
  }
  if (edges.empty()) return;

  const auto height = static_cast<long>(bitmap.height);
  const auto width = static_cast<long>(bitmap.width);
  const long y_begin = std::max(0L, static_cast<long>(std::floor(min_y)));
  const long y_end = std::min(height, static_cast<long>(std::ceil(max_y)));
  const long x_begin = std::max(0L, static_cast<long>(std::floor(min_x)));
  const long x_end = std::min(width, static_cast<long>(std::ceil(max_x)));
  if (y_begin >= y_end || x_begin >= x_end) return;

  std::vector<double> coverage(static_cast<std::size_t>(x_end - x_begin));
  std::vector<Crossing> crossings;

  for (long py = y_begin; py < y_end; ++py) {
    std::fill(coverage.begin(), coverage.end(), 0.0);
    bool row_has_ink = false;

    for (int s = 0; s < kSamplesPerRow; ++s) {
      const double sy =
          static_cast<double>(py) + (static_cast<double>(s) + 0.5) / kSamplesPerRow;
      crossings.clear();
      for (const Edge& edge : edges) {
        if (sy < edge.y0 || sy >= edge.y1) continue;
        const double t = (sy - edge.y0) / (edge.y1 - edge.y0);
        crossings.push_back({edge.x0 + t * (edge.x1 - edge.x0), edge.winding});
      }
      if (crossings.empty()) continue;
      std::sort(crossings.begin(), crossings.end(),
                [](const Crossing& a, const Crossing& b) { return a.x < b.x; });

      int winding = 0;
      double span_start = 0.0;
      bool inside = false;
      for (const Crossing& crossing : crossings) {
        const int next = winding + crossing.winding;
        const bool was_inside = even_odd ? (winding % 2 != 0) : (winding != 0);
        const bool now_inside = even_odd ? (next % 2 != 0) : (next != 0);
        if (!was_inside && now_inside) {
          span_start = crossing.x;
          inside = true;
        } else if (was_inside && !now_inside && inside) {
          // Deposit [span_start, crossing.x) into the coverage row.
          const double xa = std::max(span_start, static_cast<double>(x_begin));
          const double xb = std::min(crossing.x, static_cast<double>(x_end));
          if (xb > xa) {
            row_has_ink = true;
            long px = static_cast<long>(std::floor(xa));
            for (; px < static_cast<long>(std::ceil(xb)); ++px) {
              const double left = std::max(xa, static_cast<double>(px));
              const double right = std::min(xb, static_cast<double>(px) + 1.0);
              if (right > left)
                coverage[static_cast<std::size_t>(px - x_begin)] +=
                    (right - left) / kSamplesPerRow;
            }
          }
          inside = false;
        }
        winding = next;
      }
    }

    if (!row_has_ink) continue;
    for (long px = x_begin; px < x_end; ++px) {
      const double cover = coverage[static_cast<std::size_t>(px - x_begin)];
      if (cover <= 0.0) continue;
      const Rgba src = paint.sample(static_cast<double>(px) + 0.5,
                                    static_cast<double>(py) + 0.5);
      const double alpha = std::clamp(cover, 0.0, 1.0) * src.a * alpha_scale;
      if (alpha <= 0.0) continue;
      std::uint8_t* dst = bitmap.pixel(static_cast<std::size_t>(px),
                                       static_cast<std::size_t>(py));
      dst[0] = static_cast<std::uint8_t>(
          std::lround(src.r * 255.0 * alpha + dst[0] * (1.0 - alpha)));
      dst[1] = static_cast<std::uint8_t>(
          std::lround(src.g * 255.0 * alpha + dst[1] * (1.0 - alpha)));
      dst[2] = static_cast<std::uint8_t>(
          std::lround(src.b * 255.0 * alpha + dst[2] * (1.0 - alpha)));
      dst[3] = 255;
    }
  }
}

}  // namespace mocr::render::detail

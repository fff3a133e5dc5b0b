#pragma once

#include <span>
#include <vector>

#include "mocr/svg/path.hpp"
#include "mocr/svg/transform.hpp"

namespace mocr::render::detail {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

// Affine map [a c e; b d f] on column vectors.
struct Mat {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0, e = 0.0, f = 0.0;

  Vec2 apply(Vec2 p) const { return {a * p.x + c * p.y + e, b * p.x + d * p.y + f}; }
  double det() const { return a * d - b * c; }
};

// m ∘ n: apply n first, then m. CTM composes as parent * local.
Mat mul(const Mat& m, const Mat& n);
Mat translate(double tx, double ty);
Mat scale(double sx, double sy);
// Inverse; degenerate matrices (|det| below 1e-12) throw RenderError.
Mat inverse(const Mat& m);

/// Matrix of a parsed transform list, composed left to right.
Mat matrix_of(std::span<const svg::TransformFunction> functions);

struct Subpath {
  std::vector<Vec2> points;
  bool closed = false;
};

/// Flattens path commands into polylines in user space. Curves use fixed
/// subdivision counts so output is deterministic.
std::vector<Subpath> flatten_path(std::span<const svg::PathCommand> commands);

/// Regular sampling of an axis-aligned ellipse, closed, clockwise in the
/// SVG y-down coordinate sense.
Subpath ellipse_outline(double cx, double cy, double rx, double ry);

/// Rectangle, optionally with rounded corners (rx/ry clamped to half size).
Subpath rect_outline(double x, double y, double w, double h, double rx, double ry);

}  // namespace mocr::render::detail

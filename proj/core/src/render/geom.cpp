#include "geom.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

#include "mocr/common/error.hpp"

namespace mocr::render::detail {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kEllipseSegments = 64;
constexpr std::size_t kCubicSegments = 24;
constexpr std::size_t kQuadraticSegments = 16;

double radians(double degrees) { return degrees * kPi / 180.0; }

Mat rotate(double degrees) {
  const double r = radians(degrees);
  const double cs = std::cos(r), sn = std::sin(r);
  return {cs, sn, -sn, cs, 0.0, 0.0};
}

Mat skew_x(double degrees) { return {1.0, 0.0, std::tan(radians(degrees)), 1.0, 0.0, 0.0}; }
Mat skew_y(double degrees) { return {1.0, std::tan(radians(degrees)), 0.0, 1.0, 0.0, 0.0}; }

// Endpoint-parameterized elliptical arc to polyline (SVG spec appendix F.6.5).
void append_arc(std::vector<Vec2>& points, Vec2 from, double rx, double ry, double rotation_deg,
                bool large_arc, bool sweep, Vec2 to) {
  if (from.x == to.x && from.y == to.y) return;
  rx = std::abs(rx);
  ry = std::abs(ry);
  if (rx == 0.0 || ry == 0.0) {
    points.push_back(to);
    return;
  }
  const double phi = radians(rotation_deg);
  const double cos_phi = std::cos(phi), sin_phi = std::sin(phi);
  const double dx2 = (from.x - to.x) / 2.0, dy2 = (from.y - to.y) / 2.0;
  const double x1 = cos_phi * dx2 + sin_phi * dy2;
  const double y1 = -sin_phi * dx2 + cos_phi * dy2;

  // Scale radii up when the endpoints cannot be connected otherwise.
  const double lambda = (x1 * x1) / (rx * rx) + (y1 * y1) / (ry * ry);
  if (lambda > 1.0) {
    const double s = std::sqrt(lambda);
    rx *= s;
    ry *= s;
  }

  const double rx2 = rx * rx, ry2 = ry * ry;
  double sign = large_arc != sweep ? 1.0 : -1.0;
  double sq = (rx2 * ry2 - rx2 * y1 * y1 - ry2 * x1 * x1) / (rx2 * y1 * y1 + ry2 * x1 * x1);
  sq = std::max(sq, 0.0);
  const double coefficient = sign * std::sqrt(sq);
  const double cx1 = coefficient * (rx * y1 / ry);
  const double cy1 = coefficient * -(ry * x1 / rx);
  const double cx = cos_phi * cx1 - sin_phi * cy1 + (from.x + to.x) / 2.0;
  const double cy = sin_phi * cx1 + cos_phi * cy1 + (from.y + to.y) / 2.0;

  auto angle = [](double ux, double uy, double vx, double vy) {
    const double dot = ux * vx + uy * vy;
    const double len = std::sqrt((ux * ux + uy * uy) * (vx * vx + vy * vy));
    double value = std::clamp(dot / len, -1.0, 1.0);
    double result = std::acos(value);
    return (ux * vy - uy * vx) < 0.0 ? -result : result;
  };
  const double theta1 = angle(1.0, 0.0, (x1 - cx1) / rx, (y1 - cy1) / ry);
  double dtheta = angle((x1 - cx1) / rx, (y1 - cy1) / ry, (-x1 - cx1) / rx, (-y1 - cy1) / ry);
  if (!sweep && dtheta > 0.0) dtheta -= 2.0 * kPi;
  if (sweep && dtheta < 0.0) dtheta += 2.0 * kPi;

  const auto segments = static_cast<std::size_t>(
      std::clamp(std::ceil(std::abs(dtheta) / (kPi / 16.0)), 2.0, 64.0));
  for (std::size_t i = 1; i <= segments; ++i) {
    const double t = theta1 + dtheta * static_cast<double>(i) / static_cast<double>(segments);
    const double ex = rx * std::cos(t), ey = ry * std::sin(t);
    points.push_back({cos_phi * ex - sin_phi * ey + cx, sin_phi * ex + cos_phi * ey + cy});
  }
  points.back() = to;  // kill accumulated rounding at the join
}

void append_cubic(std::vector<Vec2>& points, Vec2 p0, Vec2 p1, Vec2 p2, Vec2 p3) {
  for (std::size_t i = 1; i <= kCubicSegments; ++i) {
    const double t = static_cast<double>(i) / kCubicSegments;
    const double u = 1.0 - t;
    const double w0 = u * u * u, w1 = 3.0 * u * u * t, w2 = 3.0 * u * t * t, w3 = t * t * t;
    points.push_back({w0 * p0.x + w1 * p1.x + w2 * p2.x + w3 * p3.x,
                      w0 * p0.y + w1 * p1.y + w2 * p2.y + w3 * p3.y});
  }
}

void append_quadratic(std::vector<Vec2>& points, Vec2 p0, Vec2 p1, Vec2 p2) {
  for (std::size_t i = 1; i <= kQuadraticSegments; ++i) {
    const double t = static_cast<double>(i) / kQuadraticSegments;
    const double u = 1.0 - t;
    points.push_back({u * u * p0.x + 2.0 * u * t * p1.x + t * t * p2.x,
                      u * u * p0.y + 2.0 * u * t * p1.y + t * t * p2.y});
  }
}

}  // namespace

Mat mul(const Mat& m, const Mat& n) {
  return {m.a * n.a + m.c * n.b,       m.b * n.a + m.d * n.b, m.a * n.c + m.c * n.d,
          m.b * n.c + m.d * n.d,       m.a * n.e + m.c * n.f + m.e,
          m.b * n.e + m.d * n.f + m.f};
}

Mat translate(double tx, double ty) { return {1.0, 0.0, 0.0, 1.0, tx, ty}; }
Mat scale(double sx, double sy) { return {sx, 0.0, 0.0, sy, 0.0, 0.0}; }

Mat inverse(const Mat& m) {
  const double determinant = m.det();
  if (std::abs(determinant) < 1e-12) throw RenderError("singular transform");
  const double inv = 1.0 / determinant;
  Mat r;
  r.a = m.d * inv;
  r.b = -m.b * inv;
  r.c = -m.c * inv;
  r.d = m.a * inv;
  r.e = (m.c * m.f - m.d * m.e) * inv;
  r.f = (m.b * m.e - m.a * m.f) * inv;
  return r;
}

Mat matrix_of(std::span<const svg::TransformFunction> functions) {
  Mat m;
  for (const auto& fn : functions) {
    const auto& a = fn.args;
    Mat local;
    if (fn.name == "translate") {
      local = translate(a[0], a.size() > 1 ? a[1] : 0.0);
    } else if (fn.name == "scale") {
      local = scale(a[0], a.size() > 1 ? a[1] : a[0]);
    } else if (fn.name == "rotate") {
      if (a.size() == 3)
        local = mul(mul(translate(a[1], a[2]), rotate(a[0])), translate(-a[1], -a[2]));
      else
        local = rotate(a[0]);
    } else if (fn.name == "skewX") {
      local = skew_x(a[0]);
    } else if (fn.name == "skewY") {
      local = skew_y(a[0]);
    } else {  // matrix
      local = {a[0], a[1], a[2], a[3], a[4], a[5]};
    }
    m = mul(m, local);
  }
  return m;
}

std::vector<Subpath> flatten_path(std::span<const svg::PathCommand> commands) {
  std::vector<Subpath> subpaths;
  Subpath current;
  Vec2 point{};           // current point
  Vec2 start{};           // subpath start, target of Z
  Vec2 last_control{};    // reflected control for S/T
  char last_op = 0;

  auto begin_subpath = [&](Vec2 at) {
    if (current.points.size() > 1) subpaths.push_back(std::move(current));
    current = Subpath{};
    current.points.push_back(at);
    start = at;
  };
  auto vertex = [&](Vec2 p) {
    if (current.points.empty()) current.points.push_back(point);
    current.points.push_back(p);
    point = p;
  };

  for (const svg::PathCommand& command : commands) {
    const char op = command.op;
    const bool relative = std::islower(static_cast<unsigned char>(op));
    const auto& args = command.args;
    auto absolute = [&](double x, double y) -> Vec2 {
      return relative ? Vec2{point.x + x, point.y + y} : Vec2{x, y};
    };
    switch (std::tolower(static_cast<unsigned char>(op))) {
      case 'm': {
        point = absolute(args[0], args[1]);
        begin_subpath(point);
        break;
      }
      case 'l': {
        vertex(absolute(args[0], args[1]));
        break;
      }
      case 'h': {
        vertex(relative ? Vec2{point.x + args[0], point.y} : Vec2{args[0], point.y});
        break;
      }
      case 'v': {
        vertex(relative ? Vec2{point.x, point.y + args[0]} : Vec2{point.x, args[0]});
        break;
      }
      case 'c': {
        const Vec2 c1 = absolute(args[0], args[1]);
        const Vec2 c2 = absolute(args[2], args[3]);
        const Vec2 to = absolute(args[4], args[5]);
        if (current.points.empty()) current.points.push_back(point);
        append_cubic(current.points, point, c1, c2, to);
        point = to;
        last_control = c2;
        break;
      }
      case 's': {
        const char prev = static_cast<char>(std::tolower(last_op));
        const Vec2 c1 = (prev == 'c' || prev == 's')
                            ? Vec2{2.0 * point.x - last_control.x, 2.0 * point.y - last_control.y}
                            : point;
        const Vec2 c2 = absolute(args[0], args[1]);
        const Vec2 to = absolute(args[2], args[3]);
        if (current.points.empty()) current.points.push_back(point);
        append_cubic(current.points, point, c1, c2, to);
        point = to;
        last_control = c2;
        break;
      }
      case 'q': {
        const Vec2 c = absolute(args[0], args[1]);
        const Vec2 to = absolute(args[2], args[3]);
        if (current.points.empty()) current.points.push_back(point);
        append_quadratic(current.points, point, c, to);
        point = to;
        last_control = c;
        break;
      }
      case 't': {
        const char prev = static_cast<char>(std::tolower(last_op));
        const Vec2 c = (prev == 'q' || prev == 't')
                           ? Vec2{2.0 * point.x - last_control.x, 2.0 * point.y - last_control.y}
                           : point;
        const Vec2 to = absolute(args[0], args[1]);
        if (current.points.empty()) current.points.push_back(point);
        append_quadratic(current.points, point, c, to);
        point = to;
        last_control = c;
        break;
      }
      case 'a': {
        const Vec2 to = absolute(args[5], args[6]);
        if (current.points.empty()) current.points.push_back(point);
        append_arc(current.points, point, args[0], args[1], args[2], args[3] != 0.0,
                   args[4] != 0.0, to);
        point = to;
        break;
      }
      case 'z': {
        current.closed = true;
        if (current.points.size() > 1) subpaths.push_back(std::move(current));
        current = Subpath{};
        point = start;
        current.points.push_back(point);
        break;
      }
      default:
        break;
    }
    last_op = op;
  }
  if (current.points.size() > 1) subpaths.push_back(std::move(current));
  return subpaths;
}

Subpath ellipse_outline(double cx, double cy, double rx, double ry) {
  Subpath subpath;
  subpath.closed = true;
  subpath.points.reserve(kEllipseSegments);
  for (std::size_t i = 0; i < kEllipseSegments; ++i) {
    const double t = 2.0 * kPi * static_cast<double>(i) / kEllipseSegments;
    subpath.points.push_back({cx + rx * std::cos(t), cy + ry * std::sin(t)});
  }
  return subpath;
}

Subpath rect_outline(double x, double y, double w, double h, double rx, double ry) {
  Subpath subpath;
  subpath.closed = true;
  if (rx <= 0.0 && ry <= 0.0) {
    subpath.points = {{x, y}, {x + w, y}, {x + w, y + h}, {x, y + h}};
    return subpath;
  }
  if (rx <= 0.0) rx = ry;
  if (ry <= 0.0) ry = rx;
  rx = std::min(rx, w / 2.0);
  ry = std::min(ry, h / 2.0);
  constexpr std::size_t kCornerSegments = 8;
  auto corner = [&](double ccx, double ccy, double from_deg) {
    for (std::size_t i = 0; i <= kCornerSegments; ++i) {
      const double t = radians(from_deg + 90.0 * static_cast<double>(i) / kCornerSegments);
      subpath.points.push_back({ccx + rx * std::cos(t), ccy + ry * std::sin(t)});
    }
  };
  // Clockwise in y-down screen space, starting at the top-right corner arc.
  corner(x + w - rx, y + ry, 270.0);
  corner(x + w - rx, y + h - ry, 0.0);
  corner(x + rx, y + h - ry, 90.0);
  corner(x + rx, y + ry, 180.0);
  return subpath;
}

}  // namespace mocr::render::detail

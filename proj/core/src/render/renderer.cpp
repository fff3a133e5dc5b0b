#include "mocr/render/renderer.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "font.hpp"
#include "geom.hpp"
#include "mocr/common/error.hpp"
#include "mocr/common/text.hpp"
#include "mocr/svg/canonical.hpp"
#include "mocr/svg/path.hpp"
#include "mocr/svg/transform.hpp"
#include "mocr/svg/xml.hpp"
#include "raster.hpp"

namespace mocr::render {
namespace {

using detail::DevicePaint;
using detail::GradientStop;
using detail::Mat;
using detail::Rgba;
using detail::Subpath;
using detail::Vec2;

constexpr double kPi = 3.14159265358979323846;
constexpr double kTextStrokeEm = 0.08;  // stroke width of the fallback face

enum class Axis { kX, kY, kDiag };
enum class Cap { kButt, kRound, kSquare };
enum class Anchor { kStart, kMiddle, kEnd };

// ---------------------------------------------------------------------------
// Colors and paint references

struct NamedColor {
  std::string_view name;
  Rgba color;
};

constexpr Rgba rgb(int r, int g, int b) {
  return {r / 255.0, g / 255.0, b / 255.0, 1.0};
}

// The common subset of CSS named colors; covers what document graphics use.
constexpr NamedColor kNamedColors[] = {
    {"aqua", rgb(0, 255, 255)},       {"beige", rgb(245, 245, 220)},
    {"black", rgb(0, 0, 0)},          {"blue", rgb(0, 0, 255)},
    {"brown", rgb(165, 42, 42)},      {"coral", rgb(255, 127, 80)},
    {"crimson", rgb(220, 20, 60)},    {"cyan", rgb(0, 255, 255)},
    {"darkblue", rgb(0, 0, 139)},     {"darkgray", rgb(169, 169, 169)},
    {"darkgreen", rgb(0, 100, 0)},    {"darkgrey", rgb(169, 169, 169)},
    {"darkorange", rgb(255, 140, 0)}, {"darkred", rgb(139, 0, 0)},
    {"dimgray", rgb(105, 105, 105)},  {"fuchsia", rgb(255, 0, 255)},
    {"gainsboro", rgb(220, 220, 220)},{"gold", rgb(255, 215, 0)},
    {"gray", rgb(128, 128, 128)},     {"green", rgb(0, 128, 0)},
    {"grey", rgb(128, 128, 128)},     {"indigo", rgb(75, 0, 130)},
    {"ivory", rgb(255, 255, 240)},    {"khaki", rgb(240, 230, 140)},
    {"lavender", rgb(230, 230, 250)}, {"lightblue", rgb(173, 216, 230)},
    {"lightgray", rgb(211, 211, 211)},{"lightgreen", rgb(144, 238, 144)},
    {"lightgrey", rgb(211, 211, 211)},{"lime", rgb(0, 255, 0)},
    {"magenta", rgb(255, 0, 255)},    {"maroon", rgb(128, 0, 0)},
    {"navy", rgb(0, 0, 128)},         {"olive", rgb(128, 128, 0)},
    {"orange", rgb(255, 165, 0)},     {"orchid", rgb(218, 112, 214)},
    {"pink", rgb(255, 192, 203)},     {"plum", rgb(221, 160, 221)},
    {"purple", rgb(128, 0, 128)},     {"red", rgb(255, 0, 0)},
    {"salmon", rgb(250, 128, 114)},   {"silver", rgb(192, 192, 192)},
    {"skyblue", rgb(135, 206, 235)},  {"slategray", rgb(112, 128, 144)},
    {"tan", rgb(210, 180, 140)},      {"teal", rgb(0, 128, 128)},
    {"tomato", rgb(255, 99, 71)},     {"turquoise", rgb(64, 224, 208)},
    {"violet", rgb(238, 130, 238)},   {"wheat", rgb(245, 222, 179)},
    {"white", rgb(255, 255, 255)},    {"whitesmoke", rgb(245, 245, 245)},
    {"yellow", rgb(255, 255, 0)},     {"yellowgreen", rgb(154, 205, 50)},
};

std::string lowercase(std::string_view text) {
  std::string out(text);
  for (char& c : out)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::optional<double> hex_nibbles(std::string_view hex) {
  double value = 0.0;
  for (char c : hex) {
    int digit;
    if (c >= '0' && c <= '9') digit = c - '0';
    else if (c >= 'a' && c <= 'f') digit = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') digit = c - 'A' + 10;
    else return std::nullopt;
    value = value * 16.0 + digit;
  }
  return value;
}

// One component of rgb()/rgba(): integer-ish number or percentage.
std::optional<double> color_component(std::string_view token, double scale_max) {
  token = text::trim(token);
  double factor = 1.0;
  if (!token.empty() && token.back() == '%') {
    token.remove_suffix(1);
    factor = scale_max / 100.0;
  }
  double value;
  if (!svg::parse_number(text::trim(token), value)) return std::nullopt;
  return std::clamp(value * factor, 0.0, scale_max);
}

std::vector<std::string_view> split_arguments(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  bool in_token = false;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    const bool boundary =
        i == text.size() || text[i] == ',' || text::is_space(text[i]);
    if (boundary) {
      if (in_token) parts.push_back(text.substr(start, i - start));
      in_token = false;
    } else if (!in_token) {
      start = i;
      in_token = true;
    }
  }
  return parts;
}

std::optional<Rgba> parse_color(std::string_view value, const Rgba& current_color) {
  std::string token = lowercase(text::trim(value));
  if (token.empty()) return std::nullopt;
  if (token == "currentcolor") return current_color;
  if (token == "transparent") return Rgba{0, 0, 0, 0};

  if (token.front() == '#') {
    std::string_view hex(token);
    hex.remove_prefix(1);
    auto nib = [&](std::size_t i) { return hex_nibbles(hex.substr(i, 1)); };
    auto pair = [&](std::size_t i) { return hex_nibbles(hex.substr(i, 2)); };
    if (hex.size() == 3 || hex.size() == 4) {
      auto r = nib(0), g = nib(1), b = nib(2);
      auto a = hex.size() == 4 ? nib(3) : std::optional<double>(15.0);
      if (!r || !g || !b || !a) return std::nullopt;
      return Rgba{*r * 17 / 255.0, *g * 17 / 255.0, *b * 17 / 255.0, *a * 17 / 255.0};
    }
    if (hex.size() == 6 || hex.size() == 8) {
      auto r = pair(0), g = pair(2), b = pair(4);
      auto a = hex.size() == 8 ? pair(6) : std::optional<double>(255.0);
      if (!r || !g || !b || !a) return std::nullopt;
      return Rgba{*r / 255.0, *g / 255.0, *b / 255.0, *a / 255.0};
    }
    return std::nullopt;
  }

  const bool is_rgba = token.rfind("rgba(", 0) == 0;
  if (is_rgba || token.rfind("rgb(", 0) == 0) {
    if (token.back() != ')') return std::nullopt;
    const std::size_t open = token.find('(');
    std::string_view body(token);
    body = body.substr(open + 1, token.size() - open - 2);
    const std::vector<std::string_view> parts = split_arguments(body);
    if (parts.size() != 3 && parts.size() != 4) return std::nullopt;
    auto r = color_component(parts[0], 255.0);
    auto g = color_component(parts[1], 255.0);
    auto b = color_component(parts[2], 255.0);
    if (!r || !g || !b) return std::nullopt;
    double alpha = 1.0;
    if (parts.size() == 4) {
      auto a = color_component(parts[3], 1.0);
      if (!a) return std::nullopt;
      alpha = *a;
    }
    return Rgba{*r / 255.0, *g / 255.0, *b / 255.0, alpha};
  }

  for (const NamedColor& named : kNamedColors)
    if (named.name == token) return named.color;
  return std::nullopt;
}

struct PaintRef {
  enum class Kind { kNone, kColor, kRef } kind = Kind::kNone;
  Rgba color;
  std::string ref;  // element id for url(#id)
};

std::optional<PaintRef> parse_paint(std::string_view value, const Rgba& current_color) {
  std::string token(text::trim(value));
  if (token.empty()) return std::nullopt;
  std::string lower = lowercase(token);
  if (lower == "none") return PaintRef{PaintRef::Kind::kNone, {}, {}};
  if (lower.rfind("url(", 0) == 0) {
    const std::size_t close = token.find(')');
    if (close == std::string::npos) return std::nullopt;
    std::string_view target = text::trim(std::string_view(token).substr(4, close - 4));
    if (target.size() < 2 || target.front() != '#') return std::nullopt;
    target.remove_prefix(1);
    return PaintRef{PaintRef::Kind::kRef, {}, std::string(target)};
  }
  if (auto color = parse_color(token, current_color))
    return PaintRef{PaintRef::Kind::kColor, *color, {}};
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Inherited graphics state

struct GraphicsState {
  Mat ctm;
  PaintRef fill{PaintRef::Kind::kColor, Rgba{0, 0, 0, 1}, {}};
  PaintRef stroke{PaintRef::Kind::kNone, {}, {}};
  double fill_opacity = 1.0;
  double stroke_opacity = 1.0;
  double group_alpha = 1.0;  // product of ancestor `opacity` values
  double stroke_width = 1.0;
  bool even_odd = false;
  Cap cap = Cap::kButt;
  double font_size = 16.0;
  Anchor anchor = Anchor::kStart;
  Rgba color{0, 0, 0, 1};  // resolves currentColor
};

struct BoundingBox {
  double min_x = std::numeric_limits<double>::infinity();
  double min_y = std::numeric_limits<double>::infinity();
  double max_x = -std::numeric_limits<double>::infinity();
  double max_y = -std::numeric_limits<double>::infinity();

  void include(Vec2 p) {
    min_x = std::min(min_x, p.x);
    min_y = std::min(min_y, p.y);
    max_x = std::max(max_x, p.x);
    max_y = std::max(max_y, p.y);
  }
  bool usable() const { return max_x > min_x && max_y > min_y; }
};

// Inline style declarations of one element, parsed once. Only properties the
// canonicalizer would keep take part, so rasterization does not depend on
// whether the markup was canonicalized.
class PropertyView {
 public:
  explicit PropertyView(const svg::XmlElement& element) : element_(element) {
    if (const std::string* style = element.attribute("style")) {
      std::string_view rest(*style);
      while (!rest.empty()) {
        const std::size_t semi = rest.find(';');
        std::string_view declaration = rest.substr(0, semi);
        rest = semi == std::string_view::npos ? std::string_view{} : rest.substr(semi + 1);
        const std::size_t colon = declaration.find(':');
        if (colon == std::string_view::npos) continue;
        std::string name = lowercase(text::trim(declaration.substr(0, colon)));
        std::string_view value = text::trim(declaration.substr(colon + 1));
        if (value.empty() || !svg::style_property_supported(name)) continue;
        declarations_.emplace_back(std::move(name), std::string(value));
      }
    }
  }

  std::optional<std::string_view> get(std::string_view name) const {
    for (const auto& [prop, value] : declarations_)
      if (prop == name) return std::string_view(value);
    if (const std::string* attr = element_.attribute(name)) return std::string_view(*attr);
    return std::nullopt;
  }

 private:
  const svg::XmlElement& element_;
  std::vector<std::pair<std::string, std::string>> declarations_;
};

// ---------------------------------------------------------------------------
// Stroke outlines
//
// A stroked polyline becomes one quad per segment plus a disc at every join
// (and at round caps). All pieces share the same orientation, so a nonzero
// fill over the lot is their union; overlaps never cancel.

void add_disc(std::vector<std::vector<Vec2>>& out, Vec2 center, double radius) {
  constexpr int kSides = 16;
  std::vector<Vec2> poly;
  poly.reserve(kSides);
  for (int i = 0; i < kSides; ++i) {
    const double t = -2.0 * kPi * i / kSides;  // clockwise, matching the quads
    poly.push_back({center.x + radius * std::cos(t), center.y + radius * std::sin(t)});
  }
  out.push_back(std::move(poly));
}

std::vector<std::vector<Vec2>> stroke_outline(const std::vector<Subpath>& subpaths,
                                              double width, Cap cap) {
  const double h = width / 2.0;
  std::vector<std::vector<Vec2>> out;
  for (const Subpath& subpath : subpaths) {
    std::vector<Vec2> pts;
    pts.reserve(subpath.points.size());
    for (const Vec2& p : subpath.points) {
      if (pts.empty() || std::abs(p.x - pts.back().x) > 1e-12 ||
          std::abs(p.y - pts.back().y) > 1e-12) {
        pts.push_back(p);
      }
    }
    bool closed = subpath.closed;
    if (closed && pts.size() > 1 && std::abs(pts.front().x - pts.back().x) < 1e-12 &&
        std::abs(pts.front().y - pts.back().y) < 1e-12) {
      pts.pop_back();
    }
    if (pts.size() < 2) {
      // zero-length subpath: a round cap still paints a dot
      if (!pts.empty() && cap == Cap::kRound) add_disc(out, pts.front(), h);
      continue;
    }

    const std::size_t n = pts.size();
    const std::size_t segments = closed ? n : n - 1;
    for (std::size_t i = 0; i < segments; ++i) {
      Vec2 a = pts[i];
      Vec2 b = pts[(i + 1) % n];
      const double dx = b.x - a.x;
      const double dy = b.y - a.y;
      const double len = std::hypot(dx, dy);
      if (len < 1e-12) continue;
      const Vec2 dir{dx / len, dy / len};
      if (!closed && cap == Cap::kSquare) {
        if (i == 0) a = {a.x - dir.x * h, a.y - dir.y * h};
        if (i == segments - 1) b = {b.x + dir.x * h, b.y + dir.y * h};
      }
      const Vec2 nrm{-dir.y, dir.x};
      out.push_back({{a.x + nrm.x * h, a.y + nrm.y * h},
                     {b.x + nrm.x * h, b.y + nrm.y * h},
                     {b.x - nrm.x * h, b.y - nrm.y * h},
                     {a.x - nrm.x * h, a.y - nrm.y * h}});
    }
    if (closed) {
      for (const Vec2& p : pts) add_disc(out, p, h);
    } else {
      for (std::size_t i = 1; i + 1 < n; ++i) add_disc(out, pts[i], h);
      if (cap == Cap::kRound) {
        add_disc(out, pts.front(), h);
        add_disc(out, pts.back(), h);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// The renderer proper

class Renderer {
 public:
  Renderer(Bitmap& bitmap, RenderStats& stats) : bitmap_(bitmap), stats_(stats) {}

  void run(const svg::XmlElement& root) {
    index_ids(root);
    GraphicsState state;
    state.ctm = viewport_matrix(root);
    draw_element(root, state, /*is_root=*/true);
  }

 private:
  // --- setup -------------------------------------------------------------

  void index_ids(const svg::XmlElement& element) {
    if (const std::string* id = element.attribute("id"))
      by_id_.try_emplace(*id, &element);
    for (const svg::XmlNode& child : element.children)
      if (const auto* el = std::get_if<svg::XmlElement>(&child)) index_ids(*el);
  }

  Mat viewport_matrix(const svg::XmlElement& root) {
    double vx = 0, vy = 0, vw = 0, vh = 0;
    if (const std::string* box = root.attribute("viewBox")) {
      std::vector<double> numbers;
      if (!svg::parse_number_list(*box, numbers) || numbers.size() != 4)
        throw StructureError("render: malformed viewBox");
      vx = numbers[0];
      vy = numbers[1];
      vw = numbers[2];
      vh = numbers[3];
    } else {
      auto dimension = [&](const char* name) -> double {
        const std::string* value = root.attribute(name);
        if (!value) return 0.0;
        std::string_view token = text::trim(*value);
        if (token.size() > 2 && token.substr(token.size() - 2) == "px")
          token = text::trim(token.substr(0, token.size() - 2));
        double parsed;
        return svg::parse_number(token, parsed) ? parsed : 0.0;
      };
      vw = dimension("width");
      vh = dimension("height");
    }
    if (!(vw > 0.0) || !(vh > 0.0))
      throw StructureError("render: no usable viewBox or width/height");
    view_w_ = vw;
    view_h_ = vh;

    const double sx = static_cast<double>(bitmap_.width) / vw;
    const double sy = static_cast<double>(bitmap_.height) / vh;
    const double s = std::min(sx, sy);
    const double tx = (static_cast<double>(bitmap_.width) - s * vw) / 2.0 - s * vx;
    const double ty = (static_cast<double>(bitmap_.height) - s * vh) / 2.0 - s * vy;
    return Mat{s, 0.0, 0.0, s, tx, ty};
  }

  // --- attribute plumbing --------------------------------------------------

  std::optional<double> number_of(std::optional<std::string_view> raw, Axis axis) const {
    if (!raw) return std::nullopt;
    std::string_view token = text::trim(*raw);
    if (token.empty()) return std::nullopt;
    double factor = 1.0;
    if (token.back() == '%') {
      token = text::trim(token.substr(0, token.size() - 1));
      switch (axis) {
        case Axis::kX: factor = view_w_ / 100.0; break;
        case Axis::kY: factor = view_h_ / 100.0; break;
        case Axis::kDiag:
          factor = std::sqrt((view_w_ * view_w_ + view_h_ * view_h_) / 2.0) / 100.0;
          break;
      }
    } else if (token.size() > 2 && token.substr(token.size() - 2) == "px") {
      token = text::trim(token.substr(0, token.size() - 2));
    }
    double value;
    if (!svg::parse_number(token, value)) return std::nullopt;
    return value * factor;
  }

  double length_of(const PropertyView& props, std::string_view name, Axis axis,
                   double fallback) const {
    return number_of(props.get(name), axis).value_or(fallback);
  }

  // Applies inheritable presentation properties plus transform/opacity.
  void apply_properties(const svg::XmlElement& element, const PropertyView& props,
                        GraphicsState& state) const {
    if (const std::string* transform = element.attribute("transform"))
      state.ctm = mul(state.ctm, detail::matrix_of(svg::parse_transform(*transform)));

    if (auto value = props.get("color"))
      if (auto c = parse_color(*value, state.color)) state.color = *c;
    if (auto value = props.get("fill"))
      if (auto p = parse_paint(*value, state.color)) state.fill = *p;
    if (auto value = props.get("stroke"))
      if (auto p = parse_paint(*value, state.color)) state.stroke = *p;
    if (auto value = number_of(props.get("stroke-width"), Axis::kDiag))
      state.stroke_width = *value;
    if (auto value = number_of(props.get("fill-opacity"), Axis::kX))
      state.fill_opacity = std::clamp(*value, 0.0, 1.0);
    if (auto value = number_of(props.get("stroke-opacity"), Axis::kX))
      state.stroke_opacity = std::clamp(*value, 0.0, 1.0);
    if (auto value = number_of(props.get("opacity"), Axis::kX))
      state.group_alpha *= std::clamp(*value, 0.0, 1.0);
    if (auto value = props.get("fill-rule")) {
      if (*value == "evenodd") state.even_odd = true;
      else if (*value == "nonzero") state.even_odd = false;
    }
    if (auto value = props.get("stroke-linecap")) {
      if (*value == "round") state.cap = Cap::kRound;
      else if (*value == "square") state.cap = Cap::kSquare;
      else if (*value == "butt") state.cap = Cap::kButt;
    }
    if (auto value = number_of(props.get("font-size"), Axis::kDiag))
      if (*value > 0.0) state.font_size = *value;
    if (auto value = props.get("text-anchor")) {
      if (*value == "middle") state.anchor = Anchor::kMiddle;
      else if (*value == "end") state.anchor = Anchor::kEnd;
      else if (*value == "start") state.anchor = Anchor::kStart;
    }
  }

  // --- gradients -----------------------------------------------------------

  // Stops may live on the gradient itself or be inherited through href.
  const svg::XmlElement* stop_source(const svg::XmlElement* gradient, int depth) const {
    if (!gradient || depth <= 0) return nullptr;
    for (const svg::XmlNode& child : gradient->children)
      if (const auto* el = std::get_if<svg::XmlElement>(&child))
        if (el->local_name() == "stop") return gradient;
    const std::string* href = gradient->attribute("href");
    if (!href) href = gradient->attribute("xlink:href");
    if (!href || href->size() < 2 || (*href)[0] != '#') return nullptr;
    auto it = by_id_.find(href->substr(1));
    if (it == by_id_.end()) return nullptr;
    return stop_source(it->second, depth - 1);
  }

  std::vector<GradientStop> gradient_stops(const svg::XmlElement& gradient,
                                           const GraphicsState& state) const {
    std::vector<GradientStop> stops;
    const svg::XmlElement* source = stop_source(&gradient, 4);
    if (!source) return stops;
    for (const svg::XmlNode& child : source->children) {
      const auto* el = std::get_if<svg::XmlElement>(&child);
      if (!el || el->local_name() != "stop") continue;
      PropertyView props(*el);
      GradientStop stop;
      double offset = 0.0;
      if (auto raw = props.get("offset")) {
        std::string_view token = text::trim(*raw);
        double factor = 1.0;
        if (!token.empty() && token.back() == '%') {
          token = text::trim(token.substr(0, token.size() - 1));
          factor = 0.01;
        }
        double value;
        if (svg::parse_number(token, value)) offset = value * factor;
      }
      stop.offset = std::clamp(offset, 0.0, 1.0);
      if (!stops.empty()) stop.offset = std::max(stop.offset, stops.back().offset);
      stop.color = Rgba{0, 0, 0, 1};
      if (auto value = props.get("stop-color"))
        if (auto c = parse_color(*value, state.color)) stop.color = *c;
      if (auto value = number_of(props.get("stop-opacity"), Axis::kX))
        stop.color.a *= std::clamp(*value, 0.0, 1.0);
      stops.push_back(stop);
    }
    return stops;
  }

  std::optional<DevicePaint> gradient_paint(const svg::XmlElement& gradient,
                                            const GraphicsState& state,
                                            const BoundingBox& bbox) const {
    std::vector<GradientStop> stops = gradient_stops(gradient, state);
    if (stops.empty()) return std::nullopt;
    if (stops.size() == 1) {
      DevicePaint paint;
      paint.kind = DevicePaint::Kind::kSolid;
      paint.solid = stops.front().color;
      return paint;
    }

    const std::string* units = gradient.attribute("gradientUnits");
    const bool user_space = units && *units == "userSpaceOnUse";
    if (!user_space && !bbox.usable()) return std::nullopt;

    PropertyView props(gradient);
    // In object-bounding-box units both "0.5" and "50%" mean the same
    // fraction; in user space percentages refer to the viewport.
    auto coordinate = [&](const char* name, double fallback, Axis axis) {
      auto raw = props.get(name);
      if (!raw) return fallback;
      if (user_space) return number_of(raw, axis).value_or(fallback);
      std::string_view token = text::trim(*raw);
      double factor = 1.0;
      if (!token.empty() && token.back() == '%') {
        token = text::trim(token.substr(0, token.size() - 1));
        factor = 0.01;
      }
      double value;
      return svg::parse_number(token, value) ? value * factor : fallback;
    };

    Mat to_device = state.ctm;
    if (!user_space) {
      const Mat bbox_map = mul(detail::translate(bbox.min_x, bbox.min_y),
                               detail::scale(bbox.max_x - bbox.min_x, bbox.max_y - bbox.min_y));
      to_device = mul(to_device, bbox_map);
    }
    if (const std::string* transform = gradient.attribute("gradientTransform"))
      to_device = mul(to_device, detail::matrix_of(svg::parse_transform(*transform)));

    DevicePaint paint;
    try {
      paint.to_gradient = detail::inverse(to_device);
    } catch (const RenderError&) {
      paint.kind = DevicePaint::Kind::kSolid;  // degenerate mapping: last stop wins
      paint.solid = stops.back().color;
      return paint;
    }
    paint.stops = std::move(stops);
    if (gradient.local_name() == "linearGradient") {
      paint.kind = DevicePaint::Kind::kLinear;
      paint.p1 = {coordinate("x1", 0.0, Axis::kX), coordinate("y1", 0.0, Axis::kY)};
      paint.p2 = {coordinate("x2", 1.0, Axis::kX), coordinate("y2", 0.0, Axis::kY)};
    } else {
      paint.kind = DevicePaint::Kind::kRadial;
      paint.center = {coordinate("cx", 0.5, Axis::kX), coordinate("cy", 0.5, Axis::kY)};
      paint.radius = coordinate("r", 0.5, Axis::kDiag);
      if (!(paint.radius > 0.0)) {
        paint.kind = DevicePaint::Kind::kSolid;
        paint.solid = paint.stops.back().color;
      }
    }
    return paint;
  }

  std::optional<DevicePaint> resolve_paint(const PaintRef& ref, const GraphicsState& state,
                                           const BoundingBox& bbox) const {
    switch (ref.kind) {
      case PaintRef::Kind::kNone:
        return std::nullopt;
      case PaintRef::Kind::kColor: {
        DevicePaint paint;
        paint.kind = DevicePaint::Kind::kSolid;
        paint.solid = ref.color;
        return paint;
      }
      case PaintRef::Kind::kRef: {
        auto it = by_id_.find(ref.ref);
        if (it == by_id_.end()) return std::nullopt;
        const std::string_view kind = it->second->local_name();
        if (kind != "linearGradient" && kind != "radialGradient") return std::nullopt;
        return gradient_paint(*it->second, state, bbox);
      }
    }
    return std::nullopt;
  }

  // --- painting ------------------------------------------------------------

  void paint_subpaths(const std::vector<Subpath>& user_subpaths, const GraphicsState& state,
                      bool fillable) {
    if (user_subpaths.empty()) return;
    BoundingBox bbox;
    for (const Subpath& subpath : user_subpaths)
      for (const Vec2& p : subpath.points) bbox.include(p);

    std::vector<Subpath> device_subpaths = user_subpaths;
    for (Subpath& subpath : device_subpaths)
      for (Vec2& p : subpath.points) p = state.ctm.apply(p);

    if (fillable && state.fill.kind != PaintRef::Kind::kNone) {
      if (auto paint = resolve_paint(state.fill, state, bbox)) {
        std::vector<std::vector<Vec2>> polygons;
        polygons.reserve(device_subpaths.size());
        for (Subpath& subpath : device_subpaths) polygons.push_back(subpath.points);
        detail::fill_polygons(bitmap_, polygons, state.even_odd, *paint,
                              state.fill_opacity * state.group_alpha);
      }
    }

    if (state.stroke.kind != PaintRef::Kind::kNone && state.stroke_width > 0.0) {
      if (auto paint = resolve_paint(state.stroke, state, bbox)) {
        const double scale = std::sqrt(std::abs(state.ctm.det()));
        const double device_width = state.stroke_width * scale;
        if (device_width > 0.0) {
          const auto outline = stroke_outline(device_subpaths, device_width, state.cap);
          detail::fill_polygons(bitmap_, outline, /*even_odd=*/false, *paint,
                                state.stroke_opacity * state.group_alpha);
        }
      }
    }
  }

  // --- text ----------------------------------------------------------------

  struct TextPiece {
    std::string text;       // empty for pure position markers
    GraphicsState state;    // fill and font context for these glyphs
    std::optional<double> x, y;
    double dx = 0.0, dy = 0.0;
  };

  // `state` must already carry the element's own properties; children get
  // theirs applied here, exactly once.
  void collect_text(const svg::XmlElement& element, const GraphicsState& state,
                    std::vector<TextPiece>& pieces) const {
    PropertyView props(element);
    TextPiece marker;
    marker.state = state;
    marker.x = number_of(props.get("x"), Axis::kX);
    marker.y = number_of(props.get("y"), Axis::kY);
    marker.dx = length_of(props, "dx", Axis::kX, 0.0);
    marker.dy = length_of(props, "dy", Axis::kY, 0.0);
    pieces.push_back(std::move(marker));

    for (const svg::XmlNode& child : element.children) {
      if (const auto* txt = std::get_if<svg::XmlText>(&child)) {
        std::string collapsed = text::collapse_whitespace_keep_edges(txt->text);
        if (collapsed.empty()) continue;
        TextPiece piece;
        piece.text = std::move(collapsed);
        piece.state = state;
        pieces.push_back(std::move(piece));
      } else if (const auto* el = std::get_if<svg::XmlElement>(&child)) {
        const std::string_view name = el->local_name();
        if (name == "tspan" || name == "textPath") {
          GraphicsState child_state = state;
          PropertyView child_props(*el);
          apply_properties(*el, child_props, child_state);
          collect_text(*el, child_state, pieces);
        }
      }
    }
  }

  double advance_of(const TextPiece& piece) const {
    double total = 0.0;
    for (char c : piece.text)
      total += detail::lookup_glyph(c).advance * piece.state.font_size;
    return total;
  }

  void draw_glyph_run(const TextPiece& piece, double pen_x, double baseline_y) {
    const GraphicsState& state = piece.state;
    const double size = state.font_size;
    double x = pen_x;
    for (char c : piece.text) {
      const detail::Glyph& glyph = detail::lookup_glyph(c);
      if (!glyph.strokes.empty()) {
        stats_.used_fallback_font = true;
        std::vector<Subpath> strokes;
        strokes.reserve(glyph.strokes.size());
        for (const std::vector<Vec2>& polyline : glyph.strokes) {
          Subpath subpath;
          subpath.points.reserve(polyline.size());
          for (const Vec2& p : polyline)
            subpath.points.push_back({x + p.x * size, baseline_y + (p.y - 1.0) * size});
          strokes.push_back(std::move(subpath));
        }
        std::vector<Subpath> device = strokes;
        for (Subpath& subpath : device)
          for (Vec2& p : subpath.points) p = state.ctm.apply(p);
        BoundingBox bbox;
        for (const Subpath& subpath : strokes)
          for (const Vec2& p : subpath.points) bbox.include(p);
        if (auto paint = resolve_paint(state.fill, state, bbox)) {
          const double scale = std::sqrt(std::abs(state.ctm.det()));
          const auto outline =
              stroke_outline(device, kTextStrokeEm * size * scale, Cap::kRound);
          detail::fill_polygons(bitmap_, outline, /*even_odd=*/false, *paint,
                                state.fill_opacity * state.group_alpha);
        }
      }
      x += glyph.advance * size;
    }
  }

  void draw_text(const svg::XmlElement& element, const GraphicsState& state) {
    std::vector<TextPiece> pieces;
    collect_text(element, state, pieces);

    // A run is a maximal sequence between absolute repositions; the anchor
    // shifts each run as a whole.
    struct Placed {
      const TextPiece* piece;
      double offset;  // from run start, before anchoring
    };
    double cursor_x = 0.0, cursor_y = 0.0;
    double run_x = 0.0, run_y = 0.0;
    double run_width = 0.0;
    Anchor run_anchor = state.anchor;
    std::vector<Placed> run;

    auto flush = [&]() {
      double shift = 0.0;
      if (run_anchor == Anchor::kMiddle) shift = -run_width / 2.0;
      if (run_anchor == Anchor::kEnd) shift = -run_width;
      for (const Placed& placed : run)
        draw_glyph_run(*placed.piece, run_x + shift + placed.offset, run_y);
      run.clear();
      run_width = 0.0;
    };

    for (const TextPiece& piece : pieces) {
      if (piece.text.empty()) {
        if (piece.x || piece.y) {
          flush();
          if (piece.x) cursor_x = *piece.x;
          if (piece.y) cursor_y = *piece.y;
          run_x = cursor_x;
          run_y = cursor_y;
          run_anchor = piece.state.anchor;
        }
        cursor_x += piece.dx;
        cursor_y += piece.dy;
        run_x = cursor_x - run_width;  // keep offsets consistent after dx/dy
        run_y = cursor_y;
        continue;
      }
      const double width = advance_of(piece);
      run.push_back({&piece, run_width});
      run_width += width;
      cursor_x += width;
    }
    flush();
  }

  // --- element dispatch ------------------------------------------------------

  bool skip_silently(std::string_view name) const {
    static constexpr std::string_view kSkip[] = {
        "defs",  "symbol",   "marker",   "clipPath",        "mask",
        "pattern", "style",  "metadata", "title",           "desc",
        "script", "filter",  "linearGradient", "radialGradient", "stop",
        "foreignObject",
    };
    for (std::string_view tag : kSkip)
      if (tag == name) return true;
    return false;
  }

  void draw_children(const svg::XmlElement& element, const GraphicsState& state) {
    for (const svg::XmlNode& child : element.children)
      if (const auto* el = std::get_if<svg::XmlElement>(&child))
        draw_element(*el, state, /*is_root=*/false);
  }

  void draw_element(const svg::XmlElement& element, GraphicsState state, bool is_root) {
    const std::string_view name = element.local_name();
    if (skip_silently(name)) return;

    PropertyView props(element);
    if (auto display = props.get("display"); display && *display == "none") return;
    apply_properties(element, props, state);
    // Approximation: a hidden subtree stays hidden even if a child sets
    // visibility back to visible.
    if (auto visibility = props.get("visibility");
        visibility && (*visibility == "hidden" || *visibility == "collapse"))
      return;

    if (name == "svg") {
      if (!is_root) {
        // Nested svg: honored as a translated group, no extra clipping.
        const double x = length_of(props, "x", Axis::kX, 0.0);
        const double y = length_of(props, "y", Axis::kY, 0.0);
        state.ctm = mul(state.ctm, detail::translate(x, y));
      }
      draw_children(element, state);
      return;
    }
    if (name == "g" || name == "a" || name == "switch") {
      draw_children(element, state);
      return;
    }
    if (name == "use") {
      draw_use(element, props, state);
      return;
    }
    if (name == "text") {
      draw_text(element, state);
      return;
    }

    if (name == "rect") {
      const double w = length_of(props, "width", Axis::kX, 0.0);
      const double h = length_of(props, "height", Axis::kY, 0.0);
      if (w <= 0.0 || h <= 0.0) return;
      const double x = length_of(props, "x", Axis::kX, 0.0);
      const double y = length_of(props, "y", Axis::kY, 0.0);
      double rx = length_of(props, "rx", Axis::kX, -1.0);
      double ry = length_of(props, "ry", Axis::kY, -1.0);
      if (rx < 0.0 && ry < 0.0) rx = ry = 0.0;
      paint_subpaths({detail::rect_outline(x, y, w, h, std::max(rx, 0.0), std::max(ry, 0.0))},
                     state, /*fillable=*/true);
      return;
    }
    if (name == "circle") {
      const double r = length_of(props, "r", Axis::kDiag, 0.0);
      if (r <= 0.0) return;
      const double cx = length_of(props, "cx", Axis::kX, 0.0);
      const double cy = length_of(props, "cy", Axis::kY, 0.0);
      paint_subpaths({detail::ellipse_outline(cx, cy, r, r)}, state, /*fillable=*/true);
      return;
    }
    if (name == "ellipse") {
      const double rx = length_of(props, "rx", Axis::kX, 0.0);
      const double ry = length_of(props, "ry", Axis::kY, 0.0);
      if (rx <= 0.0 || ry <= 0.0) return;
      const double cx = length_of(props, "cx", Axis::kX, 0.0);
      const double cy = length_of(props, "cy", Axis::kY, 0.0);
      paint_subpaths({detail::ellipse_outline(cx, cy, rx, ry)}, state, /*fillable=*/true);
      return;
    }
    if (name == "line") {
      Subpath subpath;
      subpath.points = {{length_of(props, "x1", Axis::kX, 0.0),
                         length_of(props, "y1", Axis::kY, 0.0)},
                        {length_of(props, "x2", Axis::kX, 0.0),
                         length_of(props, "y2", Axis::kY, 0.0)}};
      paint_subpaths({std::move(subpath)}, state, /*fillable=*/false);
      return;
    }
    if (name == "polyline" || name == "polygon") {
      const std::string* raw = element.attribute("points");
      std::vector<double> numbers;
      if (!raw || !svg::parse_number_list(*raw, numbers) || numbers.size() < 4) return;
      Subpath subpath;
      subpath.closed = name == "polygon";
      for (std::size_t i = 0; i + 1 < numbers.size(); i += 2)
        subpath.points.push_back({numbers[i], numbers[i + 1]});
      paint_subpaths({std::move(subpath)}, state, /*fillable=*/true);
      return;
    }
    if (name == "path") {
      const std::string* d = element.attribute("d");
      if (!d || text::trim(*d).empty()) return;
      std::vector<svg::PathCommand> commands;
      try {
        commands = svg::parse_path(*d);
      } catch (const TextParseError&) {
        ++stats_.ignored_elements;  // unusable path data, drawing skipped
        return;
      }
      paint_subpaths(detail::flatten_path(commands), state, /*fillable=*/true);
      return;
    }

    ++stats_.ignored_elements;
  }

  void draw_use(const svg::XmlElement& element, const PropertyView& props,
                GraphicsState state) {
    if (use_depth_ >= 8) return;  // reference cycles stop here
    const std::string* href = element.attribute("href");
    if (!href) href = element.attribute("xlink:href");
    if (!href || href->size() < 2 || (*href)[0] != '#') {
      ++stats_.ignored_elements;
      return;
    }
    auto it = by_id_.find(href->substr(1));
    if (it == by_id_.end()) {
      ++stats_.ignored_elements;
      return;
    }
    const double x = length_of(props, "x", Axis::kX, 0.0);
    const double y = length_of(props, "y", Axis::kY, 0.0);
    state.ctm = mul(state.ctm, detail::translate(x, y));
    ++use_depth_;
    draw_element(*it->second, state, /*is_root=*/false);
    --use_depth_;
  }

  Bitmap& bitmap_;
  RenderStats& stats_;
  std::unordered_map<std::string, const svg::XmlElement*> by_id_;
  double view_w_ = 1.0;
  double view_h_ = 1.0;
  int use_depth_ = 0;
};

}  // namespace

Bitmap render(std::string_view svg_text, std::size_t width, std::size_t height,
              RenderStats* stats) {
  if (width == 0 || height == 0)
    throw std::invalid_argument("render: dimensions must be at least 1");
  const svg::XmlElement root = svg::parse_xml(svg_text);
  if (root.local_name() != "svg")
    throw StructureError("render: root element is not svg");

  Bitmap bitmap = Bitmap::make(width, height);
  RenderStats local;
  Renderer renderer(bitmap, stats ? *stats : local);
  if (stats) *stats = RenderStats{};
  renderer.run(root);
  return bitmap;
}

}  // namespace mocr::render

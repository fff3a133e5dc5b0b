#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <vector>

#include "mocr/common/rng.hpp"

namespace acceptance {

namespace {

using mocr::render::Bitmap;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mocr::rng::make_engine(seed)) {}

  std::uint64_t below(std::uint64_t n) { return mocr::rng::bounded(engine_, n); }
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1p-53; }
  double range(double lo, double hi) { return lo + unit() * (hi - lo); }
  bool chance(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

constexpr const char* kPalette[] = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#bcbd22", "#17becf", "#334",    "#eee",    "crimson",
    "gold",    "darkgreen"};

const char* pick_color(Rng& rng) {
  return kPalette[rng.below(sizeof(kPalette) / sizeof(kPalette[0]))];
}

/// Formats v the way real exports do: sometimes clean, sometimes with
/// pointless precision. The drawing tolerates the tiny perturbation.
std::string num(Rng& rng, double v) {
  char buf[64];
  switch (rng.below(4)) {
    case 0:
      std::snprintf(buf, sizeof buf, "%.0f", v);
      break;
    case 1:
      std::snprintf(buf, sizeof buf, "%.2f", v);
      break;
    case 2:
      std::snprintf(buf, sizeof buf, "%.6f", v + rng.range(-0.004, 0.004));
      break;
    default:
      std::snprintf(buf, sizeof buf, "%.9f", v + rng.range(-0.004, 0.004));
      break;
  }
  return buf;
}

std::string attr(Rng& rng, const char* name, double v) {
  return std::string(" ") + name + "=\"" + num(rng, v) + "\"";
}

std::string paint_attrs(Rng& rng) {
  std::string out;
  if (rng.chance(0.25)) {
    out += std::string(" style=\"fill:") + pick_color(rng);
    if (rng.chance(0.5)) out += ";stroke:" + std::string(pick_color(rng)) + ";stroke-width:1.5";
    if (rng.chance(0.3)) out += ";opacity:0.8";
    out += "\"";
  } else {
    out += std::string(" fill=\"") + pick_color(rng) + "\"";
    if (rng.chance(0.35)) {
      out += std::string(" stroke=\"") + pick_color(rng) + "\"" + attr(rng, "stroke-width", 1 + rng.range(0, 3));
    }
    if (rng.chance(0.2)) out += attr(rng, "fill-opacity", rng.range(0.4, 1.0));
  }
  return out;
}

std::string transform_attr(Rng& rng, double w, double h) {
  if (!rng.chance(0.3)) return "";
  std::string t = " transform=\"";
  switch (rng.below(4)) {
    case 0:
      t += "translate(" + num(rng, rng.range(-10, 10)) + "," + num(rng, rng.range(-10, 10)) + ")";
      break;
    case 1:
      t += "rotate(" + num(rng, rng.range(-40, 40)) + " " + num(rng, w / 2) + " " +
           num(rng, h / 2) + ")";
      break;
    case 2:
      t += "scale(" + num(rng, rng.range(0.6, 1.4)) + ")";
      break;
    default:
      t += "translate(" + num(rng, rng.range(0, 8)) + ") scale(" + num(rng, rng.range(0.7, 1.2)) +
           ")";
      break;
  }
  return t + "\"";
}

std::string path_data(Rng& rng, double w, double h) {
  auto cx = [&] { return num(rng, rng.range(0, w)); };
  auto cy = [&] { return num(rng, rng.range(0, h)); };
  std::string d = "M" + cx() + (rng.chance(0.5) ? "," : " ") + cy();
  const std::uint64_t segments = 2 + rng.below(4);
  for (std::uint64_t s = 0; s < segments; ++s) {
    switch (rng.below(6)) {
      case 0:
        d += " L" + cx() + " " + cy();
        break;
      case 1:
        d += " C" + cx() + " " + cy() + ", " + cx() + " " + cy() + ", " + cx() + " " + cy();
        break;
      case 2:
        d += " Q" + cx() + " " + cy() + " " + cx() + " " + cy();
        break;
      case 3:
        d += " A" + num(rng, 5 + rng.range(0, 25)) + " " + num(rng, 5 + rng.range(0, 25)) + " " +
             num(rng, rng.range(0, 90)) + (rng.chance(0.5) ? " 0 " : " 1 ") +
             (rng.chance(0.5) ? "0 " : "1 ") + cx() + " " + cy();
        break;
      case 4:
        d += " H" + cx();
        break;
      default:
        d += " l" + num(rng, rng.range(-15, 15)) + " " + num(rng, rng.range(-15, 15));
        break;
    }
  }
  if (rng.chance(0.4)) d += rng.chance(0.5) ? " Z" : "z";
  return d;
}

std::string shape(Rng& rng, double w, double h, std::string& defs, int& gradient_count);

std::string basic_shape(Rng& rng, double w, double h, std::string& defs, int& gradient_count) {
  switch (rng.below(8)) {
    case 0: {
      std::string s = "<rect" + attr(rng, "x", rng.range(0, w * 0.7)) +
                      attr(rng, "y", rng.range(0, h * 0.7)) +
                      attr(rng, "width", 5 + rng.range(0, w * 0.4)) +
                      attr(rng, "height", 5 + rng.range(0, h * 0.4));
      if (rng.chance(0.3)) s += attr(rng, "rx", rng.range(1, 6));
      return s + paint_attrs(rng) + transform_attr(rng, w, h) + "/>";
    }
    case 1:
      return "<circle" + attr(rng, "cx", rng.range(0, w)) + attr(rng, "cy", rng.range(0, h)) +
             attr(rng, "r", 3 + rng.range(0, w * 0.25)) + paint_attrs(rng) + "/>";
    case 2:
      return "<ellipse" + attr(rng, "cx", rng.range(0, w)) + attr(rng, "cy", rng.range(0, h)) +
             attr(rng, "rx", 4 + rng.range(0, w * 0.3)) + attr(rng, "ry", 3 + rng.range(0, h * 0.2)) +
             paint_attrs(rng) + transform_attr(rng, w, h) + "/>";
    case 3:
      return "<line" + attr(rng, "x1", rng.range(0, w)) + attr(rng, "y1", rng.range(0, h)) +
             attr(rng, "x2", rng.range(0, w)) + attr(rng, "y2", rng.range(0, h)) + " stroke=\"" +
             pick_color(rng) + "\"" + attr(rng, "stroke-width", 1 + rng.range(0, 4)) + "/>";
    case 4: {
      const char* tag = rng.chance(0.5) ? "polygon" : "polyline";
      std::string pts;
      const std::uint64_t n = 3 + rng.below(4);
      for (std::uint64_t i = 0; i < n; ++i) {
        if (i) pts += rng.chance(0.5) ? " " : ", ";
        pts += num(rng, rng.range(0, w)) + "," + num(rng, rng.range(0, h));
      }
      return std::string("<") + tag + " points=\"" + pts + "\"" + paint_attrs(rng) + "/>";
    }
    case 5:
      return "<path d=\"" + path_data(rng, w, h) + "\"" + paint_attrs(rng) +
             transform_attr(rng, w, h) + "/>";
    case 6: {
      static const char* kWords[] = {"Total", "Figure 3", "revenue", "page 12", "Qty", "sum"};
      return "<text" + attr(rng, "x", rng.range(0, w * 0.6)) + attr(rng, "y", 10 + rng.range(0, h - 10)) +
             attr(rng, "font-size", 8 + rng.range(0, 10)) + " fill=\"" + pick_color(rng) + "\">" +
             kWords[rng.below(6)] + "</text>";
    }
    default: {
      const std::string id = "grad" + std::to_string(gradient_count++);
      if (rng.chance(0.5)) {
        defs += "<linearGradient id=\"" + id + "\" x1=\"0\" y1=\"0\" x2=\"1\" y2=\"" +
                (rng.chance(0.5) ? "0" : "1") + "\"><stop offset=\"0\" stop-color=\"" +
                pick_color(rng) + "\"/><stop offset=\"1\" stop-color=\"" + pick_color(rng) +
                "\"/></linearGradient>";
      } else {
        defs += "<radialGradient id=\"" + id + "\"><stop offset=\"0\" stop-color=\"" +
                pick_color(rng) + "\"/><stop offset=\"1\" stop-color=\"" + pick_color(rng) +
                "\"/></radialGradient>";
      }
      return "<rect" + attr(rng, "x", rng.range(0, w * 0.5)) + attr(rng, "y", rng.range(0, h * 0.5)) +
             attr(rng, "width", w * 0.3 + rng.range(0, w * 0.3)) +
             attr(rng, "height", h * 0.3 + rng.range(0, h * 0.3)) + " fill=\"url(#" + id + ")\"/>";
    }
  }
}

std::string shape(Rng& rng, double w, double h, std::string& defs, int& gradient_count) {
  if (rng.chance(0.18)) {
    std::string g = "<g" + transform_attr(rng, w, h);
    if (rng.chance(0.4)) g += std::string(" fill=\"") + pick_color(rng) + "\"";
    if (rng.chance(0.3)) g += attr(rng, "opacity", rng.range(0.5, 1.0));
    g += ">";
    const std::uint64_t children = 1 + rng.below(2);
    for (std::uint64_t i = 0; i < children; ++i) g += basic_shape(rng, w, h, defs, gradient_count);
    return g + "</g>";
  }
  return basic_shape(rng, w, h, defs, gradient_count);
}

}  // namespace

std::string corpus_svg(std::uint64_t index) {
  Rng rng(mocr::rng::substream_seed(0xC0'5EED, index));
  const double w = 40 + static_cast<double>(rng.below(161));
  const double h = 40 + static_cast<double>(rng.below(161));

  std::string defs;
  int gradient_count = 0;
  std::string body;
  const std::uint64_t shapes = 2 + rng.below(6);
  for (std::uint64_t i = 0; i < shapes; ++i) {
    if (rng.chance(0.12)) body += "<!-- shape " + std::to_string(i) + " -->";
    body += shape(rng, w, h, defs, gradient_count);
    if (rng.chance(0.3)) body += "\n  ";
  }

  std::string root = "<svg xmlns=\"http://www.w3.org/2000/svg\"";
  const bool use_viewbox = rng.chance(0.6);
  if (use_viewbox) {
    root += " viewBox=\"0 0 " + num(rng, w) + " " + num(rng, h) + "\"";
    if (rng.chance(0.3)) root += attr(rng, "width", w) + attr(rng, "height", h);
  } else {
    root += attr(rng, "width", w) + attr(rng, "height", h);
  }
  if (rng.chance(0.25)) root += " version=\"1.1\"";
  const bool inkscape = rng.chance(0.3);
  if (inkscape) {
    root += " xmlns:inkscape=\"http://www.inkscape.org/namespaces/inkscape\""
            " inkscape:version=\"1.1 (c68e22c387, 2021-05-23)\"";
  }
  const bool sodipodi = rng.chance(0.2);
  if (sodipodi) root += " xmlns:sodipodi=\"http://sodipodi.sourceforge.net/DTD/sodipodi-0.0.dtd\"";
  root += ">";

  std::string doc;
  if (rng.chance(0.3)) doc += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  if (rng.chance(0.1)) doc += "<?xml-stylesheet type=\"text/css\" href=\"style.css\"?>\n";
  if (rng.chance(0.2)) doc += "<!-- exported for regression corpus -->\n";
  doc += root;
  if (sodipodi) {
    doc += "<sodipodi:namedview pagecolor=\"#ffffff\" bordercolor=\"#666666\"/>";
  }
  if (rng.chance(0.2)) doc += "<title>asset " + std::to_string(index) + "</title>";
  if (rng.chance(0.15)) doc += "<desc>generated drawing</desc>";
  if (rng.chance(0.12)) doc += "<metadata>layout regression corpus</metadata>";
  if (!defs.empty()) doc += "<defs>" + defs + "</defs>";
  doc += body;
  doc += "</svg>";
  if (rng.chance(0.2)) doc += "\n";
  return doc;
}

// --- icons and re-serializations -----------------------------------------------

namespace {

/// Attribute whose value is either literal text or a joined number list;
/// the list form lets the jitter variant perturb every numeral.
struct IconAttr {
  std::string name;
  std::string text;
  std::vector<double> numbers;
};

struct IconElement {
  std::string tag;
  std::vector<IconAttr> attrs;
};

IconAttr lit(std::string name, std::string value) { return {std::move(name), std::move(value), {}}; }
IconAttr nums(std::string name, std::vector<double> values) {
  return {std::move(name), {}, std::move(values)};
}

/// Six-bit cell codes with pairwise Hamming distance >= 2 (even parity).
constexpr unsigned kIconCodes[kIconCount] = {3,  5,  6,  9,  10, 12, 15, 17, 18, 20,
                                             23, 24, 27, 29, 30, 33, 34, 36, 39, 40};

std::vector<IconElement> icon_elements(std::size_t icon) {
  static const char* kAccent[] = {"#d62728", "#1f77b4", "#ff7f0e", "#9467bd", "#17becf"};
  const unsigned code = kIconCodes[icon % kIconCount];

  std::vector<IconElement> elements;
  elements.push_back({"svg",
                      {lit("xmlns", "http://www.w3.org/2000/svg"),
                       nums("viewBox", {0, 0, 48, 48})}});
  for (unsigned cell = 0; cell < 6; ++cell) {
    const double col = cell % 3;
    const double row = cell / 3;
    const bool dark = (code >> cell) & 1u;
    elements.push_back({"rect",
                        {nums("x", {col * 16}), nums("y", {row * 24}), nums("width", {16}),
                         nums("height", {24}), lit("fill", dark ? "#2a2a2a" : "#d8d8d8")}});
  }
  const double k = static_cast<double>(icon);
  switch (icon % 3) {
    case 0:
      elements.push_back({"circle",
                          {nums("cx", {8 + k}), nums("cy", {24}), nums("r", {5 + double(icon % 5)}),
                           lit("fill", kAccent[icon % 5])}});
      break;
    case 1:
      elements.push_back({"rect",
                          {nums("x", {30 - double(icon % 7)}), nums("y", {10 + double(icon % 9)}),
                           nums("width", {10}), nums("height", {8}),
                           lit("fill", kAccent[icon % 5])}});
      break;
    default:
      elements.push_back(
          {"polygon",
           {nums("points", {4 + k, 40, 14 + k, 40, 9 + k, 30}), lit("fill", kAccent[icon % 5])}});
      break;
  }
  return elements;
}

std::string render_value(const IconAttr& attr, bool jitter) {
  if (attr.numbers.empty()) return attr.text;
  std::string out;
  for (std::size_t i = 0; i < attr.numbers.size(); ++i) {
    if (i) out += attr.name == "points" ? "," : " ";
    char buf[48];
    if (jitter) {
      std::snprintf(buf, sizeof buf, "%.7f", attr.numbers[i] + 3e-7);
    } else {
      std::snprintf(buf, sizeof buf, "%.10g", attr.numbers[i]);
    }
    out += buf;
  }
  return out;
}

std::string serialize_icon(const std::vector<IconElement>& elements, const char* gap,
                           bool reversed, bool jitter) {
  std::string out;
  for (std::size_t e = 0; e < elements.size(); ++e) {
    const IconElement& el = elements[e];
    out += "<" + el.tag;
    std::vector<const IconAttr*> order;
    for (const IconAttr& a : el.attrs) order.push_back(&a);
    if (reversed) std::reverse(order.begin(), order.end());
    for (const IconAttr* a : order) out += gap + a->name + "=\"" + render_value(*a, jitter) + "\"";
    out += e == 0 ? ">" : "/>";
  }
  out += "</svg>";
  return out;
}

}  // namespace

std::string icon_svg(std::size_t icon) {
  return serialize_icon(icon_elements(icon), " ", false, false);
}

std::string icon_variant(std::size_t icon, IconVariant variant) {
  const std::vector<IconElement> elements = icon_elements(icon);
  switch (variant) {
    case IconVariant::kWhitespace:
      return serialize_icon(elements, "\n    ", false, false);
    case IconVariant::kAttributeOrder:
      return serialize_icon(elements, " ", true, false);
    default:
      return serialize_icon(elements, " ", false, true);
  }
}

// --- raster fixtures -------------------------------------------------------------

namespace {

struct Rgb {
  std::uint8_t r, g, b;
};

constexpr Rgb kColors[] = {{31, 119, 180}, {255, 127, 14}, {44, 160, 44},  {214, 39, 40},
                           {148, 103, 189}, {23, 190, 207}, {240, 228, 66}, {40, 40, 40},
                           {220, 220, 220}, {120, 60, 10}};

Rgb pick_rgb(Rng& rng) { return kColors[rng.below(sizeof(kColors) / sizeof(kColors[0]))]; }

void put(Bitmap& bmp, std::size_t x, std::size_t y, Rgb c) {
  std::uint8_t* p = bmp.pixel(x, y);
  p[0] = c.r;
  p[1] = c.g;
  p[2] = c.b;
  p[3] = 255;
}

Rgb lerp(Rgb a, Rgb b, double t) {
  auto mix = [t](std::uint8_t u, std::uint8_t v) {
    return static_cast<std::uint8_t>(std::lround(u + t * (v - u)));
  };
  return {mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b)};
}

}  // namespace

Bitmap fixture_bitmap(std::uint64_t index) {
  Rng rng(mocr::rng::substream_seed(0xB17A9, index));
  const std::size_t w = 96 + rng.below(65);  // 96..160, odd sizes included
  const std::size_t h = 96 + rng.below(65);
  Bitmap bmp = Bitmap::make(w, h);
  const Rgb a = pick_rgb(rng);
  Rgb b = pick_rgb(rng);
  if (a.r == b.r && a.g == b.g && a.b == b.b) {
    b = {static_cast<std::uint8_t>(255 - a.r), static_cast<std::uint8_t>(255 - a.g),
         static_cast<std::uint8_t>(255 - a.b)};
  }

  // The hash's target content is rasterized vector graphics: big shapes,
  // gradients, broad bands. Patterns stay at periods well above the 32x32
  // downsample so the fixtures measure noise response, not aliasing.
  switch (index % 5) {
    case 0: {  // directional gradient
      const double gx = 0.3 + rng.range(0, 1.2), gy = rng.range(0, 1.2);
      const double span = gx * static_cast<double>(w - 1) + gy * static_cast<double>(h - 1);
      for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x)
          put(bmp, x, y, lerp(a, b, (gx * static_cast<double>(x) + gy * static_cast<double>(y)) / span));
      break;
    }
    case 1: {  // coarse checker, 3..5 cells across
      const std::size_t cell = w / 5 + rng.below(w / 6);
      for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x) put(bmp, x, y, ((x / cell + y / cell) & 1) ? a : b);
      break;
    }
    case 2: {  // wide concentric rings
      const double cx = static_cast<double>(w) / 2 + rng.range(-10, 10);
      const double cy = static_cast<double>(h) / 2 + rng.range(-10, 10);
      const double ring = 18 + rng.range(0, 14);
      for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x) {
          const double d = std::hypot(static_cast<double>(x) - cx, static_cast<double>(y) - cy);
          put(bmp, x, y, (static_cast<std::size_t>(d / ring) & 1) ? a : b);
        }
      break;
    }
    case 3: {  // a drawing from the corpus generator, the hash's real input
      try {
        return mocr::render::render(corpus_svg(5000 + index), w, h);
      } catch (const std::exception&) {
        for (std::size_t y = 0; y < h; ++y)
          for (std::size_t x = 0; x < w; ++x)
            put(bmp, x, y, lerp(a, b, static_cast<double>(y) / static_cast<double>(h - 1)));
      }
      break;
    }
    default: {  // shapes over a gradient wash
      for (std::size_t y = 0; y < h; ++y)
        for (std::size_t x = 0; x < w; ++x)
          put(bmp, x, y, lerp(a, b, static_cast<double>(x + y) / static_cast<double>(w + h - 2)));
      const std::uint64_t blobs = 3 + rng.below(4);
      for (std::uint64_t i = 0; i < blobs; ++i) {
        const Rgb c = pick_rgb(rng);
        const double cx = rng.range(0, static_cast<double>(w));
        const double cy = rng.range(0, static_cast<double>(h));
        const double r = 14 + rng.range(0, static_cast<double>(w) / 4);
        for (std::size_t y = 0; y < h; ++y)
          for (std::size_t x = 0; x < w; ++x)
            if (std::hypot(static_cast<double>(x) - cx, static_cast<double>(y) - cy) < r)
              put(bmp, x, y, c);
      }
      break;
    }
  }
  return bmp;
}

Bitmap flip_noise(const Bitmap& source, double fraction, std::uint64_t seed) {
  Bitmap out = source;
  const std::size_t total = source.width * source.height;
  std::size_t count = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(total)));
  if (count == 0) count = 1;

  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto engine = mocr::rng::make_engine(seed);
  // Partial Fisher-Yates: only the first `count` slots need settling.
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(mocr::rng::bounded(engine, total - i));
    std::swap(order[i], order[j]);
  }
  for (std::size_t i = 0; i < count; ++i) {
    std::uint8_t* p = out.samples.data() + order[i] * 4;
    for (int c = 0; c < 3; ++c) p[c] = static_cast<std::uint8_t>(255 - p[c]);
  }
  return out;
}

}  // namespace acceptance

#include "mocr/svg/canonical.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>
#include <string>
#include <vector>

#include "mocr/common/error.hpp"
#include "mocr/common/text.hpp"
#include "mocr/svg/path.hpp"
#include "mocr/svg/transform.hpp"
#include "mocr/svg/xml.hpp"

namespace mocr::svg {

namespace {

constexpr int kDecimals = 2;
constexpr std::string_view kSvgNamespace = "http://www.w3.org/2000/svg";

constexpr std::array<std::string_view, 10> kEditorPrefixes = {
    "inkscape", "sodipodi", "sketch", "vectornator", "figma",
    "krita",    "serif",    "dc",     "cc",          "rdf",
};

constexpr std::array<std::string_view, 4> kMetadataElements = {"metadata", "title", "desc",
                                                               "style"};
constexpr std::array<std::string_view, 2> kScriptElements = {"script", "foreignObject"};

// Presentation properties a style attribute may carry; anything else is
// dropped (and counted) rather than preserved as opaque CSS.
constexpr std::array<std::string_view, 20> kStyleProperties = {
    "fill",           "stroke",         "stroke-width",   "stroke-linecap",
    "stroke-linejoin", "stroke-opacity", "fill-opacity",   "opacity",
    "fill-rule",      "stop-color",     "stop-opacity",   "stroke-dasharray",
    "stroke-dashoffset", "font-family", "font-size",      "font-weight",
    "font-style",     "text-anchor",    "display",        "visibility",
};

// Attributes whose values never receive the generic numeric rewrite.
constexpr std::array<std::string_view, 5> kOpaqueAttributes = {"id", "class", "href",
                                                               "xlink:href", "font-family"};

template <std::size_t N>
bool contains(const std::array<std::string_view, N>& set, std::string_view value) {
  return std::find(set.begin(), set.end(), value) != set.end();
}

bool is_editor_prefix(std::string_view prefix) { return contains(kEditorPrefixes, prefix); }

bool is_text_content_element(std::string_view local) {
  return local == "text" || local == "tspan" || local == "textPath";
}

std::string collapse_keep_edges(std::string_view s) {
  return text::collapse_whitespace_keep_edges(s);
}

std::string join_numbers(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += text::format_number(values[i], kDecimals);
  }
  return out;
}

// Rounds bare numeric tokens in an arbitrary attribute value. A token starts
// at a digit, a dot+digit, or a sign, provided the preceding character is not
// alphanumeric, '_', '.', or '#' (protects hex colors and identifier tails).
std::string round_numeric_tokens(std::string_view s) {
  auto guarded = [](char prev) {
    return std::isalnum(static_cast<unsigned char>(prev)) || prev == '_' || prev == '.' ||
           prev == '#';
  };
  auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    bool starts =
        (is_digit(c) || (c == '.' && i + 1 < s.size() && is_digit(s[i + 1])) ||
         ((c == '+' || c == '-') && i + 1 < s.size() &&
          (is_digit(s[i + 1]) || (s[i + 1] == '.' && i + 2 < s.size() && is_digit(s[i + 2])))));
    if (starts && (i == 0 || !guarded(s[i - 1]))) {
      std::size_t j = i;
      if (s[j] == '+' || s[j] == '-') ++j;
      while (j < s.size() && is_digit(s[j])) ++j;
      if (j < s.size() && s[j] == '.') {
        ++j;
        while (j < s.size() && is_digit(s[j])) ++j;
      }
      if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
        if (k < s.size() && is_digit(s[k])) {
          while (k < s.size() && is_digit(s[k])) ++k;
          j = k;
        }
      }
      double value;
      if (parse_number(s.substr(i, j - i), value)) {
        out += text::format_number(value, kDecimals);
        i = j;
        continue;
      }
    }
    out.push_back(c);
    ++i;
  }
  return out;
}

std::string normalize_transform(std::string_view s, const XmlElement& element) {
  std::vector<TransformFunction> functions;
  try {
    functions = parse_transform(s);
  } catch (const TextParseError& e) {
    throw TextParseError(std::string(e.what()) + " on <" + element.name + ">", element.line,
                         element.column);
  }
  std::string out;
  for (const TransformFunction& function : functions) {
    if (!out.empty()) out.push_back(' ');
    out += function.name + "(" + join_numbers(function.args) + ")";
  }
  return out;
}

class Canonicalizer {
 public:
  explicit Canonicalizer(CanonicalizeReport& report) : report_(report) {}

  std::string run(std::string_view raw) {
    XmlElement root = parse_xml(raw);
    if (root.local_name() != "svg")
      throw StructureError("root element is <" + root.name + ">, not <svg>");
    clean(root, /*in_text=*/false);
    normalize_root(root);
    drop_unused_namespace_declarations(root);
    normalize_values(root);
    sort_attributes(root);
    return serialize_xml(root);
  }

 private:
  bool should_strip(const XmlElement& element) {
    std::string_view local = element.local_name();
    if (contains(kScriptElements, local)) {
      ++report_.stripped_script_elements;
      return true;
    }
    if (contains(kMetadataElements, local) || is_editor_prefix(name_prefix(element.name))) {
      ++report_.stripped_metadata_elements;
      return true;
    }
    return false;
  }

  void expand_style_attribute(XmlElement& element) {
    const std::string* style = element.attribute("style");
    if (!style) return;
    std::string css = *style;
    element.remove_attribute("style");
    std::size_t pos = 0;
    while (pos < css.size()) {
      std::size_t semi = css.find(';', pos);
      if (semi == std::string::npos) semi = css.size();
      std::string_view declaration = text::trim(std::string_view(css).substr(pos, semi - pos));
      pos = semi + 1;
      if (declaration.empty()) continue;
      std::size_t colon = declaration.find(':');
      if (colon == std::string_view::npos) {
        ++report_.dropped_style_declarations;
        continue;
      }
      std::string property(text::trim(declaration.substr(0, colon)));
      std::string value(text::trim(declaration.substr(colon + 1)));
      if (!contains(kStyleProperties, std::string_view(property)) || value.empty()) {
        ++report_.dropped_style_declarations;
        continue;
      }
      element.set_attribute(property, std::move(value));
    }
  }

  void clean(XmlElement& element, bool in_text) {
    expand_style_attribute(element);
    std::erase_if(element.attributes, [&](const XmlAttribute& attr) {
      if (attr.name == "version" || attr.name == "baseProfile" || attr.name == "xml:space")
        return true;
      std::string_view prefix = name_prefix(attr.name);
      return prefix != "xmlns" && is_editor_prefix(prefix);
    });

    bool text_scope = in_text || is_text_content_element(element.local_name());
    std::vector<XmlNode> kept;
    kept.reserve(element.children.size());
    for (XmlNode& child : element.children) {
      if (auto* child_element = std::get_if<XmlElement>(&child)) {
        if (should_strip(*child_element)) continue;
        clean(*child_element, text_scope);
        std::string_view local = child_element->local_name();
        if ((local == "g" || local == "defs") && child_element->children.empty() &&
            child_element->attributes.empty())
          continue;
        kept.push_back(std::move(child));
      } else {
        auto& textual = std::get<XmlText>(child);
        std::string collapsed =
            text_scope ? collapse_keep_edges(textual.text) : text::collapse_whitespace(textual.text);
        if (collapsed.empty()) continue;
        kept.push_back(XmlText{std::move(collapsed)});
      }
    }
    element.children = std::move(kept);
  }

  void normalize_root(XmlElement& root) {
    root.set_attribute("xmlns", std::string(kSvgNamespace));
    if (!root.attribute("viewBox")) {
      double width, height;
      if (!parse_length(root.attribute("width"), width) ||
          !parse_length(root.attribute("height"), height) || width <= 0 || height <= 0)
        throw StructureError("no viewBox and none derivable from width/height");
      root.set_attribute("viewBox", "0 0 " + text::format_number(width, kDecimals) + " " +
                                        text::format_number(height, kDecimals));
      report_.synthesized_viewbox = true;
    }
    root.remove_attribute("width");
    root.remove_attribute("height");
  }

  static bool parse_length(const std::string* value, double& out) {
    if (!value) return false;
    std::string_view v = text::trim(*value);
    if (v.size() > 2 && v.substr(v.size() - 2) == "px") v.remove_suffix(2);
    return parse_number(v, out);
  }

  void drop_unused_namespace_declarations(XmlElement& root) {
    std::set<std::string, std::less<>> used;
    collect_prefixes(root, used);
    drop_declarations(root, used);
  }

  static void drop_declarations(XmlElement& element, const std::set<std::string, std::less<>>& used) {
    std::erase_if(element.attributes, [&](const XmlAttribute& attr) {
      if (name_prefix(attr.name) != "xmlns") return false;
      std::string_view declared = name_local(attr.name);
      return used.find(declared) == used.end() || is_editor_prefix(declared);
    });
    for (XmlNode& child : element.children)
      if (auto* child_element = std::get_if<XmlElement>(&child))
        drop_declarations(*child_element, used);
  }

  static void collect_prefixes(const XmlElement& element, std::set<std::string, std::less<>>& out) {
    std::string_view prefix = name_prefix(element.name);
    if (!prefix.empty()) out.emplace(prefix);
    for (const XmlAttribute& attr : element.attributes) {
      std::string_view attr_prefix = name_prefix(attr.name);
      if (!attr_prefix.empty() && attr_prefix != "xmlns") out.emplace(attr_prefix);
    }
    for (const XmlNode& child : element.children)
      if (const auto* child_element = std::get_if<XmlElement>(&child))
        collect_prefixes(*child_element, out);
  }

  void normalize_values(XmlElement& element) {
    std::string_view local = element.local_name();
    for (XmlAttribute& attr : element.attributes) {
      if (attr.name == "d" && local == "path") {
        try {
          attr.value = serialize_path(parse_path(attr.value), kDecimals);
        } catch (const TextParseError& e) {
          throw TextParseError("bad path data on <" + element.name + ">: " + e.what(),
                               element.line, element.column);
        }
      } else if (attr.name == "points" && (local == "polygon" || local == "polyline")) {
        std::vector<double> values;
        if (!parse_number_list(attr.value, values))
          throw TextParseError("malformed points on <" + element.name + ">", element.line,
                               element.column);
        attr.value = join_numbers(values);
      } else if (attr.name == "viewBox") {
        std::vector<double> values;
        if (!parse_number_list(attr.value, values) || values.size() != 4)
          throw StructureError("malformed viewBox '" + attr.value + "'");
        attr.value = join_numbers(values);
      } else if (attr.name == "transform" || attr.name == "gradientTransform" ||
                 attr.name == "patternTransform") {
        attr.value = normalize_transform(attr.value, element);
      } else if (name_prefix(attr.name) != "xmlns" &&
                 !contains(kOpaqueAttributes, std::string_view(attr.name))) {
        attr.value = round_numeric_tokens(attr.value);
      }
    }
    for (XmlNode& child : element.children)
      if (auto* child_element = std::get_if<XmlElement>(&child)) normalize_values(*child_element);
  }

  void sort_attributes(XmlElement& element) {
    std::sort(element.attributes.begin(), element.attributes.end(),
              [](const XmlAttribute& a, const XmlAttribute& b) { return a.name < b.name; });
    for (XmlNode& child : element.children)
      if (auto* child_element = std::get_if<XmlElement>(&child)) sort_attributes(*child_element);
  }

  CanonicalizeReport& report_;
};

}  // namespace

std::string canonicalize(std::string_view raw, CanonicalizeReport* report) {
  CanonicalizeReport local;
  CanonicalizeReport& target = report ? *report : local;
  target = CanonicalizeReport{};
  std::string out = Canonicalizer(target).run(raw);
  return out;
}

bool style_property_supported(std::string_view name) {
  return contains(kStyleProperties, name);
}

}  // namespace mocr::svg

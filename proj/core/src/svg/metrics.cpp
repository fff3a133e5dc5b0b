#include "mocr/svg/metrics.hpp"

#include <set>
#include <string>
#include <variant>

#include "mocr/common/error.hpp"
#include "mocr/svg/path.hpp"
#include "mocr/svg/xml.hpp"

namespace mocr::svg {

namespace {

struct Walker {
  ComplexityMetrics metrics;
  std::set<std::string> colors;
  std::size_t path_index = 0;

  void visit(const XmlElement& element) {
    ++metrics.element_count;
    for (const char* paint : {"fill", "stroke"}) {
      const std::string* value = element.attribute(paint);
      if (value && *value != "none") colors.insert(*value);
    }
    if (element.local_name() == "path") {
      ++path_index;
      if (const std::string* d = element.attribute("d")) {
        try {
          metrics.path_command_count += count_path_commands(*d);
        } catch (const TextParseError& e) {
          const std::string* id = element.attribute("id");
          std::string label = "path #" + std::to_string(path_index) +
                              (id ? " (id=" + *id + ")" : "");
          throw TextParseError("malformed path data in " + label + ": " + e.what(),
                               element.line, element.column);
        }
      }
    }
    for (const XmlNode& child : element.children)
      if (const auto* child_element = std::get_if<XmlElement>(&child)) visit(*child_element);
  }
};

}  // namespace

ComplexityMetrics complexity(std::string_view canonical_text) {
  XmlElement root = parse_xml(canonical_text);
  Walker walker;
  walker.visit(root);
  walker.metrics.byte_length = canonical_text.size();
  walker.metrics.color_count = walker.colors.size();
  return walker.metrics;
}

}  // namespace mocr::svg

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mocr::svg {

// Strict parser for the XML subset SVG documents actually use: elements,
// attributes, character data, CDATA, comments, processing instructions and
// a DOCTYPE. Comments, PIs and the DOCTYPE are validated then discarded;
// the five predefined entities and numeric character references are decoded.
// Namespace prefixes are kept as part of the element/attribute name.

struct XmlAttribute {
  std::string name;
  std::string value;
};

struct XmlText {
  std::string text;
};

struct XmlElement;
using XmlNode = std::variant<XmlElement, XmlText>;

struct XmlElement {
  std::string name;
  std::vector<XmlAttribute> attributes;
  std::vector<XmlNode> children;
  // 1-based position of the opening '<', for error reporting downstream.
  std::size_t line = 0;
  std::size_t column = 0;

  /// Returns the attribute value, or nullptr when absent.
  const std::string* attribute(std::string_view attr_name) const;
  /// Sets or replaces an attribute, preserving first-seen order.
  void set_attribute(std::string_view attr_name, std::string value);
  bool remove_attribute(std::string_view attr_name);

  /// Name with any namespace prefix stripped ("inkscape:path" -> "path").
  std::string_view local_name() const;
};

/// Namespace prefix of a qualified name, empty when unprefixed.
std::string_view name_prefix(std::string_view qualified);
std::string_view name_local(std::string_view qualified);

/// Parses a complete document and returns its single root element.
/// Throws TextParseError with 1-based line/column on malformed input.
XmlElement parse_xml(std::string_view input);

/// Serializes a tree to markup on a single line, no XML declaration.
/// Childless elements become self-closing tags. Text is entity-escaped so
/// parse_xml(serialize_xml(e)) reproduces the tree.
std::string serialize_xml(const XmlElement& root);

}  // namespace mocr::svg

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mocr::parse {

/// Pixel-space region in the source image frame. Valid boxes satisfy
/// 0 <= x0 <= x1 and 0 <= y0 <= y1 with finite coordinates; validation
/// reports violations instead of constructors enforcing them, because
/// untrusted model output must be representable.
struct BoundingBox {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  bool operator==(const BoundingBox&) const = default;
};

/// Closed category set; deserialization rejects anything else.
enum class ElementCategory {
  kText,
  kTitle,
  kSectionHeader,
  kTable,
  kFormula,
  kCaption,
  kHeader,
  kFooter,
  kGraphic,
  kRaster,
};

/// Stable serialization tag ("SectionHeader", ...).
std::string_view category_name(ElementCategory category);
/// Inverse of category_name; nullopt for unknown tags.
std::optional<ElementCategory> category_from(std::string_view name);

struct PlainText {
  std::string text;
  bool operator==(const PlainText&) const = default;
};
struct TableMarkup {
  std::string text;
  bool operator==(const TableMarkup&) const = default;
};
struct FormulaMarkup {
  std::string text;
  bool operator==(const FormulaMarkup&) const = default;
};
struct SvgProgram {
  std::string text;
  bool operator==(const SvgProgram&) const = default;
};
/// Region of the source image kept as raster content; must lie within the
/// owning element's bounding box.
struct RasterRef {
  BoundingBox region;
  bool operator==(const RasterRef&) const = default;
};

using Payload = std::variant<PlainText, TableMarkup, FormulaMarkup, SvgProgram, RasterRef>;

struct ParsedElement {
  BoundingBox bbox;
  ElementCategory category = ElementCategory::kText;
  Payload payload;

  bool operator==(const ParsedElement&) const = default;
};

/// Ordered element sequence of one parsed page. Sequence position is the
/// reading order; there is no separate order field.
struct ParsedDocument {
  double page_width = 0.0;
  double page_height = 0.0;
  std::vector<ParsedElement> elements;

  bool operator==(const ParsedDocument&) const = default;
};

/// One broken invariant. `element` is empty for document-level problems
/// (bad page dimensions).
struct Violation {
  std::optional<std::size_t> element;
  std::string reason;

  bool operator==(const Violation&) const = default;
};

/// Checks every invariant and returns all violations; an empty result means
/// the document is valid. Pure: never throws, violations are data.
///
/// Checked per element: bbox well-formedness, bbox within the page,
/// category/payload compatibility (Table=TableMarkup, Formula=FormulaMarkup,
/// Raster=RasterRef, Graphic=SvgProgram or RasterRef, text-like=PlainText),
/// SvgProgram markup well-formedness, RasterRef region containment.
std::vector<Violation> validate_document(const ParsedDocument& document);

/// One line of JSON, schema "mocr-parse/1". Requires a valid document;
/// throws std::invalid_argument naming the first violation otherwise.
std::string serialize_document(const ParsedDocument& document);

/// Parses one serialized record. Throws TextParseError on malformed text,
/// unknown schema, unknown category or payload tags. Round-trips
/// serialize_document exactly, field for field.
ParsedDocument deserialize_document(std::string_view text);

}  // namespace mocr::parse

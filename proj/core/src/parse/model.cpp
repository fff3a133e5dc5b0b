#include "mocr/parse/model.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>

#include <nlohmann/json.hpp>

#include "mocr/common/error.hpp"
#include "mocr/svg/xml.hpp"

namespace mocr::parse {

namespace {

constexpr std::string_view kSchema = "mocr-parse/1";

constexpr std::array<std::pair<ElementCategory, std::string_view>, 10> kCategories = {{
    {ElementCategory::kText, "Text"},
    {ElementCategory::kTitle, "Title"},
    {ElementCategory::kSectionHeader, "SectionHeader"},
    {ElementCategory::kTable, "Table"},
    {ElementCategory::kFormula, "Formula"},
    {ElementCategory::kCaption, "Caption"},
    {ElementCategory::kHeader, "Header"},
    {ElementCategory::kFooter, "Footer"},
    {ElementCategory::kGraphic, "Graphic"},
    {ElementCategory::kRaster, "Raster"},
}};

bool finite_box(const BoundingBox& box) {
  return std::isfinite(box.x0) && std::isfinite(box.y0) && std::isfinite(box.x1) &&
         std::isfinite(box.y1);
}

bool well_formed_box(const BoundingBox& box) {
  return finite_box(box) && box.x0 >= 0.0 && box.y0 >= 0.0 && box.x0 <= box.x1 &&
         box.y0 <= box.y1;
}

bool payload_compatible(ElementCategory category, const Payload& payload) {
  switch (category) {
    case ElementCategory::kTable:
      return std::holds_alternative<TableMarkup>(payload);
    case ElementCategory::kFormula:
      return std::holds_alternative<FormulaMarkup>(payload);
    case ElementCategory::kRaster:
      return std::holds_alternative<RasterRef>(payload);
    case ElementCategory::kGraphic:
      // Either side of the two-pass pipeline: decoded program or the raster
      // region awaiting decoding.
      return std::holds_alternative<SvgProgram>(payload) ||
             std::holds_alternative<RasterRef>(payload);
    default:
      return std::holds_alternative<PlainText>(payload);
  }
}

nlohmann::json box_json(const BoundingBox& box) {
  return nlohmann::json::array({box.x0, box.y0, box.x1, box.y1});
}

BoundingBox box_from_json(const nlohmann::json& value) {
  if (!value.is_array() || value.size() != 4)
    throw TextParseError("bounding box must be an array of four numbers");
  BoundingBox box;
  box.x0 = value.at(0).get<double>();
  box.y0 = value.at(1).get<double>();
  box.x1 = value.at(2).get<double>();
  box.y1 = value.at(3).get<double>();
  return box;
}

}  // namespace

std::string_view category_name(ElementCategory category) {
  for (const auto& [value, name] : kCategories)
    if (value == category) return name;
  return "Text";
}

std::optional<ElementCategory> category_from(std::string_view name) {
  for (const auto& [value, tag] : kCategories)
    if (tag == name) return value;
  return std::nullopt;
}

std::vector<Violation> validate_document(const ParsedDocument& document) {
  std::vector<Violation> violations;
  auto flag = [&](std::optional<std::size_t> index, std::string reason) {
    violations.push_back({index, std::move(reason)});
  };

  const bool page_ok = std::isfinite(document.page_width) &&
                       std::isfinite(document.page_height) && document.page_width > 0.0 &&
                       document.page_height > 0.0;
  if (!page_ok) flag(std::nullopt, "page dimensions must be finite and positive");

  for (std::size_t i = 0; i < document.elements.size(); ++i) {
    const ParsedElement& element = document.elements[i];
    if (!well_formed_box(element.bbox)) {
      flag(i, "bounding box is not a well-formed non-negative rectangle");
    } else if (page_ok && (element.bbox.x1 > document.page_width ||
                           element.bbox.y1 > document.page_height)) {
      flag(i, "bounding box extends beyond the page rectangle");
    }

    if (!payload_compatible(element.category, element.payload)) {
      flag(i, std::string("payload type incompatible with category ") +
                  std::string(category_name(element.category)));
      continue;
    }
    if (const auto* svg_payload = std::get_if<SvgProgram>(&element.payload)) {
      try {
        const svg::XmlElement root = svg::parse_xml(svg_payload->text);
        if (root.local_name() != "svg") flag(i, "svg program root element is not svg");
      } catch (const TextParseError& error) {
        flag(i, std::string("svg program is not well-formed markup: ") + error.what());
      }
    }
    if (const auto* raster = std::get_if<RasterRef>(&element.payload)) {
      if (!well_formed_box(raster->region)) {
        flag(i, "raster region is not a well-formed non-negative rectangle");
      } else if (well_formed_box(element.bbox) &&
                 (raster->region.x0 < element.bbox.x0 || raster->region.y0 < element.bbox.y0 ||
                  raster->region.x1 > element.bbox.x1 || raster->region.y1 > element.bbox.y1)) {
        flag(i, "raster region lies outside the element bounding box");
      }
    }
  }
  return violations;
}

std::string serialize_document(const ParsedDocument& document) {
  const std::vector<Violation> violations = validate_document(document);
  if (!violations.empty()) {
    std::string where = violations.front().element
                            ? "element " + std::to_string(*violations.front().element) + ": "
                            : "";
    throw std::invalid_argument("serialize_document requires a valid document (" + where +
                                violations.front().reason + ")");
  }

  nlohmann::json elements = nlohmann::json::array();
  for (const ParsedElement& element : document.elements) {
    nlohmann::json payload;
    std::visit(
        [&](const auto& value) {
          using T = std::decay_t<decltype(value)>;
          if constexpr (std::is_same_v<T, PlainText>)
            payload = {{"type", "PlainText"}, {"text", value.text}};
          else if constexpr (std::is_same_v<T, TableMarkup>)
            payload = {{"type", "TableMarkup"}, {"text", value.text}};
          else if constexpr (std::is_same_v<T, FormulaMarkup>)
            payload = {{"type", "FormulaMarkup"}, {"text", value.text}};
          else if constexpr (std::is_same_v<T, SvgProgram>)
            payload = {{"type", "SvgProgram"}, {"text", value.text}};
          else
            payload = {{"type", "RasterRef"}, {"region", box_json(value.region)}};
        },
        element.payload);
    elements.push_back({{"bbox", box_json(element.bbox)},
                        {"category", category_name(element.category)},
                        {"payload", std::move(payload)}});
  }
  const nlohmann::json record{
      {"schema", kSchema},
      {"page", {{"width", document.page_width}, {"height", document.page_height}}},
      {"elements", std::move(elements)},
  };
  return record.dump();
}

ParsedDocument deserialize_document(std::string_view text) {
  const nlohmann::json record = nlohmann::json::parse(text, nullptr, false);
  if (record.is_discarded() || !record.is_object())
    throw TextParseError("parse record is not a JSON object");
  if (record.value("schema", "") != kSchema)
    throw TextParseError("parse record has unsupported schema \"" +
                         record.value("schema", std::string("<missing>")) + "\"");
  try {
    ParsedDocument document;
    document.page_width = record.at("page").at("width").get<double>();
    document.page_height = record.at("page").at("height").get<double>();
    std::size_t index = 0;
    for (const nlohmann::json& entry : record.at("elements")) {
      ParsedElement element;
      element.bbox = box_from_json(entry.at("bbox"));
      const std::string tag = entry.at("category").get<std::string>();
      const std::optional<ElementCategory> category = category_from(tag);
      if (!category)
        throw TextParseError("element " + std::to_string(index) + ": unknown category \"" +
                             tag + "\"");
      element.category = *category;

      const nlohmann::json& payload = entry.at("payload");
      const std::string type = payload.at("type").get<std::string>();
      if (type == "PlainText")
        element.payload = PlainText{payload.at("text").get<std::string>()};
      else if (type == "TableMarkup")
        element.payload = TableMarkup{payload.at("text").get<std::string>()};
      else if (type == "FormulaMarkup")
        element.payload = FormulaMarkup{payload.at("text").get<std::string>()};
      else if (type == "SvgProgram")
        element.payload = SvgProgram{payload.at("text").get<std::string>()};
      else if (type == "RasterRef")
        element.payload = RasterRef{box_from_json(payload.at("region"))};
      else
        throw TextParseError("element " + std::to_string(index) + ": unknown payload type \"" +
                             type + "\"");
      document.elements.push_back(std::move(element));
      ++index;
    }
    return document;
  } catch (const nlohmann::json::exception& error) {
    throw TextParseError(std::string("malformed parse record: ") + error.what());
  }
}

}  // namespace mocr::parse

#include <doctest.h>

#include <algorithm>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mocr/common/error.hpp"
#include "mocr/parse/model.hpp"

using namespace mocr;
using namespace mocr::parse;

namespace {

// A document exercising every payload type, all boxes valid and in-page.
ParsedDocument sample_document() {
  ParsedDocument doc;
  doc.page_width = 612.0;
  doc.page_height = 792.0;
  doc.elements.push_back(
      {{36, 36, 576, 72}, ElementCategory::kTitle, PlainText{"Quarterly Report"}});
  doc.elements.push_back(
      {{36, 90, 576, 110}, ElementCategory::kSectionHeader, PlainText{"1. Overview"}});
  doc.elements.push_back(
      {{36, 120, 576, 320}, ElementCategory::kText, PlainText{"Revenue grew 4%.\nCosts fell."}});
  doc.elements.push_back({{36, 340, 576, 480},
                          ElementCategory::kTable,
                          TableMarkup{"| Q | Revenue |\n|---|---|\n| 1 | 10 |"}});
  doc.elements.push_back(
      {{36, 500, 300, 530}, ElementCategory::kFormula, FormulaMarkup{"E = mc^2"}});
  doc.elements.push_back({{36, 550, 300, 700},
                          ElementCategory::kGraphic,
                          SvgProgram{R"(<svg viewBox="0 0 10 10"><rect width="10" height="10"/></svg>)"}});
  doc.elements.push_back(
      {{320, 550, 576, 700}, ElementCategory::kRaster, RasterRef{{320, 550, 576, 700}}});
  doc.elements.push_back(
      {{36, 720, 576, 740}, ElementCategory::kCaption, PlainText{"Figure 1: trend"}});
  doc.elements.push_back({{36, 10, 576, 30}, ElementCategory::kHeader, PlainText{"ACME Corp"}});
  doc.elements.push_back({{36, 760, 576, 780}, ElementCategory::kFooter, PlainText{"page 1"}});
  return doc;
}

bool mentions_element(const std::vector<Violation>& violations, std::size_t index) {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) {
    return v.element == index;
  });
}

}  // namespace

TEST_SUITE("parse.model") {
  TEST_CASE("category names round-trip and reject unknowns") {
    for (auto category :
         {ElementCategory::kText, ElementCategory::kTitle, ElementCategory::kSectionHeader,
          ElementCategory::kTable, ElementCategory::kFormula, ElementCategory::kCaption,
          ElementCategory::kHeader, ElementCategory::kFooter, ElementCategory::kGraphic,
          ElementCategory::kRaster}) {
      const auto back = category_from(category_name(category));
      REQUIRE(back.has_value());
      CHECK(*back == category);
    }
    CHECK_FALSE(category_from("Widget").has_value());
    CHECK_FALSE(category_from("text").has_value());  // tags are case-sensitive
    CHECK_FALSE(category_from("").has_value());
  }

  TEST_CASE("empty document with positive page is valid") {
    ParsedDocument doc;
    doc.page_width = 100.0;
    doc.page_height = 100.0;
    CHECK(validate_document(doc).empty());
  }

  TEST_CASE("sample document is valid and serialization round-trips exactly") {
    const ParsedDocument doc = sample_document();
    REQUIRE(validate_document(doc).empty());

    const std::string line = serialize_document(doc);
    CHECK(line.find("mocr-parse/1") != std::string::npos);
    CHECK(line.find('\n') == std::string::npos);  // one record, one line

    const ParsedDocument back = deserialize_document(line);
    CHECK(back == doc);
    // Serialization itself is stable, not just value round-tripping.
    CHECK(serialize_document(back) == line);
  }

  TEST_CASE("non-positive or non-finite page dimensions are document-level violations") {
    ParsedDocument doc;
    doc.page_width = 0.0;
    doc.page_height = 100.0;
    auto violations = validate_document(doc);
    REQUIRE_FALSE(violations.empty());
    CHECK_FALSE(violations.front().element.has_value());

    doc.page_width = 100.0;
    doc.page_height = -5.0;
    CHECK_FALSE(validate_document(doc).empty());

    doc.page_height = std::numeric_limits<double>::infinity();
    CHECK_FALSE(validate_document(doc).empty());
  }

  TEST_CASE("inverted bounding box is reported against its element index") {
    ParsedDocument doc = sample_document();
    doc.elements[3].bbox = {500, 100, 100, 200};  // x1 < x0
    const auto violations = validate_document(doc);
    REQUIRE_FALSE(violations.empty());
    CHECK(mentions_element(violations, 3));
    CHECK_FALSE(mentions_element(violations, 0));
  }

  TEST_CASE("element outside the page is a violation") {
    ParsedDocument doc = sample_document();
    doc.elements[0].bbox = {36, 36, 700, 72};  // x1 beyond page_width 612
    CHECK(mentions_element(validate_document(doc), 0));

    doc = sample_document();
    doc.elements[0].bbox = {-1, 36, 576, 72};
    CHECK(mentions_element(validate_document(doc), 0));
  }

  TEST_CASE("category and payload must agree") {
    ParsedDocument doc = sample_document();
    doc.elements[5].payload = PlainText{"not markup"};  // Graphic + PlainText
    CHECK(mentions_element(validate_document(doc), 5));

    doc = sample_document();
    doc.elements[3].payload = PlainText{"a table, allegedly"};  // Table + PlainText
    CHECK(mentions_element(validate_document(doc), 3));

    doc = sample_document();
    doc.elements[2].payload = TableMarkup{"| x |"};  // Text + TableMarkup
    CHECK(mentions_element(validate_document(doc), 2));
  }

  TEST_CASE("graphic accepts either vector markup or a raster region") {
    ParsedDocument doc = sample_document();
    REQUIRE(std::holds_alternative<SvgProgram>(doc.elements[5].payload));
    doc.elements[5].payload = RasterRef{doc.elements[5].bbox};
    CHECK(validate_document(doc).empty());
  }

  TEST_CASE("malformed vector markup is a violation") {
    ParsedDocument doc = sample_document();
    doc.elements[5].payload = SvgProgram{"<svg><rect</svg>"};
    CHECK(mentions_element(validate_document(doc), 5));

    doc.elements[5].payload = SvgProgram{"<div>not svg</div>"};
    CHECK(mentions_element(validate_document(doc), 5));
  }

  TEST_CASE("raster region must sit inside its element's box") {
    ParsedDocument doc = sample_document();
    doc.elements[6].payload = RasterRef{{300, 550, 576, 700}};  // x0 left of bbox
    CHECK(mentions_element(validate_document(doc), 6));

    doc.elements[6].payload = RasterRef{{400, 600, 380, 700}};  // inverted region
    CHECK(mentions_element(validate_document(doc), 6));
  }

  TEST_CASE("serializing an invalid document throws and names the problem") {
    ParsedDocument doc = sample_document();
    doc.elements[1].bbox = {90, 90, 10, 110};
    CHECK_THROWS_AS(serialize_document(doc), std::invalid_argument);
    try {
      serialize_document(doc);
    } catch (const std::invalid_argument& error) {
      CHECK(std::string(error.what()).find("element 1") != std::string::npos);
    }
  }

  TEST_CASE("deserialization rejects malformed input with precise errors") {
    const std::string good = serialize_document(sample_document());

    CHECK_THROWS_AS(deserialize_document("not json at all"), TextParseError);
    CHECK_THROWS_AS(deserialize_document("[1,2,3]"), TextParseError);
    CHECK_THROWS_AS(deserialize_document(""), TextParseError);

    SUBCASE("wrong schema tag") {
      std::string tampered = good;
      const auto at = tampered.find("mocr-parse/1");
      REQUIRE(at != std::string::npos);
      tampered.replace(at, 12, "mocr-parse/9");
      CHECK_THROWS_AS(deserialize_document(tampered), TextParseError);
    }

    SUBCASE("unknown category is named in the error") {
      std::string tampered = good;
      const auto at = tampered.find("\"Title\"");
      REQUIRE(at != std::string::npos);
      tampered.replace(at, 7, "\"Widget\"");
      try {
        deserialize_document(tampered);
        FAIL("expected TextParseError");
      } catch (const TextParseError& error) {
        CHECK(std::string(error.what()).find("Widget") != std::string::npos);
      }
    }

    SUBCASE("unknown payload type") {
      std::string tampered = good;
      const auto at = tampered.find("\"TableMarkup\"");
      REQUIRE(at != std::string::npos);
      tampered.replace(at, 13, "\"BlobMarkup\"");
      CHECK_THROWS_AS(deserialize_document(tampered), TextParseError);
    }
  }
}

#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace mocr::svg {

/// What canonicalization removed. Script-bearing content is reported
/// separately because stripping it changes semantics, not just serialization.
struct CanonicalizeReport {
  std::size_t stripped_script_elements = 0;    // script, foreignObject
  std::size_t stripped_metadata_elements = 0;  // metadata, title, desc, style, editor elements
  std::size_t dropped_style_declarations = 0;  // unrecognized properties in style attributes
  bool synthesized_viewbox = false;
};

/// Rewrites SVG markup into a deterministic normal form:
///   - comments, processing instructions and DOCTYPE dropped
///   - metadata/title/desc/style/script/foreignObject elements and
///     editor-namespaced elements and attributes removed
///   - style attributes expanded into presentation attributes
///     (recognized properties only; style wins over an existing attribute)
///   - version/baseProfile/xml:space and unused xmlns:prefix declarations
///     removed; the svg namespace declaration is pinned on the root
///   - numeric literals rounded to 2 decimals, trailing zeros stripped
///     (path data, points, viewBox and transforms via their own grammars)
///   - attributes sorted by name; whitespace collapsed
///   - root carries a viewBox (synthesized from width/height when absent)
///     and loses its width/height
///   - empty g/defs elements with no attributes removed
///
/// The result is a fixed point: canonicalize(canonicalize(s)) == canonicalize(s).
///
/// Throws TextParseError on malformed markup, StructureError when the root
/// is not an svg element or no viewBox can be derived.
std::string canonicalize(std::string_view raw, CanonicalizeReport* report = nullptr);

/// True for CSS properties that style-attribute expansion keeps. The
/// renderer resolves inline style with the same set, so markup rasterizes
/// identically before and after canonicalization.
bool style_property_supported(std::string_view name);

}  // namespace mocr::svg

#pragma once

#include <cstdint>
#include <string>

#include "mocr/render/bitmap.hpp"

namespace acceptance {

/// Messy but well-formed SVG markup, deterministic per index: mixed shape
/// vocabulary, gradients, groups, text, sloppy numbers, editor namespaces,
/// comments and metadata. Every file carries a usable viewBox or size.
std::string corpus_svg(std::uint64_t index);

/// Structurally distinct icons (block-coded luminance layout plus a
/// per-icon accent shape), far apart perceptually by construction.
std::string icon_svg(std::size_t icon);
constexpr std::size_t kIconCount = 20;

/// Re-serializations of `icon_svg(icon)` that leave the drawing untouched.
enum class IconVariant { kWhitespace, kAttributeOrder, kNumericJitter };
std::string icon_variant(std::size_t icon, IconVariant variant);

/// Structured raster fixtures: gradients, checkers, rings, stripes, blobs
/// in color, at mixed (including odd) sizes. Deterministic per index.
mocr::render::Bitmap fixture_bitmap(std::uint64_t index);

/// Inverts the RGB of `fraction` of the pixels, chosen without replacement.
mocr::render::Bitmap flip_noise(const mocr::render::Bitmap& source, double fraction,
                                std::uint64_t seed);

}  // namespace acceptance

#pragma once

#include <cstddef>
#include <string_view>

#include "mocr/render/bitmap.hpp"

namespace mocr::render {

/// Side channel for facts a score alone cannot carry.
struct RenderStats {
  bool used_fallback_font = false;   // text was drawn with the built-in vector face
  std::size_t ignored_elements = 0;  // elements with no rasterization support
};

/// Rasterizes SVG markup onto an opaque white canvas of the given size.
/// The viewBox is fit with uniform scale and centered (meet / xMidYMid);
/// uncovered margins stay white. Deterministic on one build and safe to
/// call from multiple threads.
///
/// Structural problems throw (malformed markup, root not svg, no viewBox
/// and no usable width/height, non-positive dimensions). Drawing-level
/// oddities degrade instead: unknown elements and invalid paint servers
/// are skipped and counted in `stats`.
Bitmap render(std::string_view svg_text, std::size_t width, std::size_t height,
              RenderStats* stats = nullptr);

}  // namespace mocr::render

#pragma once

#include <vector>

#include "geom.hpp"

namespace mocr::render::detail {

// Built-in fallback vector font: strokes in a cell of width 0.6, height 1.0,
// y = 0 at the cap line and y = 1 at the baseline. Every glyph render sets
// the used_fallback_font flag upstream; this is a stand-in, not typography.
struct Glyph {
  std::vector<std::vector<Vec2>> strokes;
  double advance = 0.8;  // cell plus spacing, in em
};

/// Lowercase maps onto uppercase; characters without a drawing map to a
/// tofu box. Space yields an empty glyph with advance only.
const Glyph& lookup_glyph(char c);

}  // namespace mocr::render::detail

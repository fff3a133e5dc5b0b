#pragma once

#include <cstddef>
#include <string_view>

namespace mocr::svg {

struct ComplexityMetrics {
  std::size_t element_count = 0;       // element nodes including the root
  std::size_t path_command_count = 0;  // drawing commands across all path data
  std::size_t byte_length = 0;         // canonical text size
  std::size_t color_count = 0;         // distinct fill/stroke values, "none" excluded
};

/// Measures canonical SVG text. Works on any parseable document; callers
/// normally pass canonicalize() output so byte_length is the normal form's.
/// Malformed path data raises TextParseError naming the offending path by
/// document order and id.
ComplexityMetrics complexity(std::string_view canonical_text);

}  // namespace mocr::svg

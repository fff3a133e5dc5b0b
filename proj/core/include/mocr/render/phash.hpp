#pragma once

#include <cstdint>

#include "mocr/render/bitmap.hpp"

namespace mocr::render {

/// Classic DCT perceptual hash:
///   1. luminance over white (Rec.601), box-averaged down to 32x32
///   2. orthonormal 2-D type-II DCT
///   3. top-left 8x8 coefficient block, DC term replaced by 0 and
///      coefficients below 1e-8 in magnitude flushed to 0 (rounding dust
///      on uniform images sits around 1e-11, real features above 1e-2)
///   4. bit = 1 iff coefficient strictly exceeds the median of the 64
///      (median of an even count = mean of the two middle values)
/// Bits are packed row-major with (0,0) at the most significant bit, so a
/// uniform image hashes to exactly 0.
std::uint64_t phash(const Bitmap& bitmap);

/// Hamming distance between hashes; a metric on 64-bit words.
unsigned hamming_distance(std::uint64_t a, std::uint64_t b);

}  // namespace mocr::render

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mocr::render {

/// 8-bit RGBA raster, row-major. Invariants: width, height >= 1 and
/// samples.size() == width * height * 4 once constructed through make().
struct Bitmap {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> samples;

  /// Allocates a solid-color bitmap; throws std::invalid_argument on a
  /// degenerate size.
  static Bitmap make(std::size_t width, std::size_t height, std::uint8_t r = 255,
                     std::uint8_t g = 255, std::uint8_t b = 255, std::uint8_t a = 255);

  std::uint8_t* pixel(std::size_t x, std::size_t y) {
    return samples.data() + (y * width + x) * 4;
  }
  const std::uint8_t* pixel(std::size_t x, std::size_t y) const {
    return samples.data() + (y * width + x) * 4;
  }

  bool valid() const {
    return width >= 1 && height >= 1 && samples.size() == width * height * 4;
  }

  bool operator==(const Bitmap&) const = default;
};

/// Rec.601 luminance of a pixel after compositing onto opaque white,
/// in [0, 255].
double luminance_over_white(const std::uint8_t* rgba);

/// Lossless PNG encode/decode (RGBA8). IoError on file problems,
/// TextParseError on malformed PNG data.
std::vector<std::uint8_t> encode_png(const Bitmap& bitmap);
Bitmap decode_png(std::span<const std::uint8_t> data);
void write_png(const Bitmap& bitmap, const std::string& path);
Bitmap read_png(const std::string& path);

}  // namespace mocr::render

#include "mocr/render/phash.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mocr::render {

namespace {

constexpr std::size_t kGrid = 32;
constexpr std::size_t kBlock = 8;

// Box average into a 32x32 grid: every source pixel lands in exactly one
// cell, so the result is deterministic for any input size.
std::array<double, kGrid * kGrid> downscale_luma(const Bitmap& bitmap) {
  std::array<double, kGrid * kGrid> sum{};
  std::array<std::uint32_t, kGrid * kGrid> count{};
  for (std::size_t y = 0; y < bitmap.height; ++y) {
    const std::size_t cy = y * kGrid / bitmap.height;
    for (std::size_t x = 0; x < bitmap.width; ++x) {
      const std::size_t cx = x * kGrid / bitmap.width;
      sum[cy * kGrid + cx] += luminance_over_white(bitmap.pixel(x, y));
      ++count[cy * kGrid + cx];
    }
  }
  std::array<double, kGrid * kGrid> cells{};
  for (std::size_t i = 0; i < cells.size(); ++i)
    cells[i] = count[i] ? sum[i] / count[i] : 0.0;
  return cells;
}

// cos((2n+1) k pi / 2N) table with orthonormal scale factors folded in.
const std::array<double, kGrid * kGrid>& dct_basis() {
  static const std::array<double, kGrid * kGrid> basis = [] {
    std::array<double, kGrid * kGrid> table{};
    const double n = static_cast<double>(kGrid);
    for (std::size_t k = 0; k < kGrid; ++k) {
      const double scale = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
      for (std::size_t i = 0; i < kGrid; ++i)
        table[k * kGrid + i] =
            scale * std::cos((2.0 * static_cast<double>(i) + 1.0) * static_cast<double>(k) *
                             std::numbers::pi / (2.0 * n));
    }
    return table;
  }();
  return basis;
}

}  // namespace

std::uint64_t phash(const Bitmap& bitmap) {
  if (!bitmap.valid()) throw std::invalid_argument("phash: invalid bitmap");
  const auto cells = downscale_luma(bitmap);
  const auto& basis = dct_basis();

  // Rows, then columns.
  std::array<double, kGrid * kGrid> rows{};
  for (std::size_t y = 0; y < kGrid; ++y)
    for (std::size_t k = 0; k < kGrid; ++k) {
      double acc = 0.0;
      for (std::size_t x = 0; x < kGrid; ++x) acc += cells[y * kGrid + x] * basis[k * kGrid + x];
      rows[y * kGrid + k] = acc;
    }
  std::array<double, kBlock * kBlock> block{};
  for (std::size_t k = 0; k < kBlock; ++k)
    for (std::size_t x = 0; x < kBlock; ++x) {
      double acc = 0.0;
      for (std::size_t y = 0; y < kGrid; ++y) acc += rows[y * kGrid + x] * basis[k * kGrid + y];
      block[k * kBlock + x] = acc;
    }

  block[0] = 0.0;
  // A uniform image has all non-DC coefficients equal to 0 mathematically,
  // but summation leaves ~1e-11 dust. The smallest coefficient a real
  // feature can produce is around 1e-2, so flushing below 1e-8 restores
  // the exact degenerate case without touching signal.
  for (double& coefficient : block)
    if (std::abs(coefficient) < 1e-8) coefficient = 0.0;
  std::array<double, kBlock * kBlock> sorted = block;
  std::sort(sorted.begin(), sorted.end());
  const double median = (sorted[31] + sorted[32]) / 2.0;

  std::uint64_t hash = 0;
  for (double coefficient : block) hash = (hash << 1) | (coefficient > median ? 1u : 0u);
  return hash;
}

unsigned hamming_distance(std::uint64_t a, std::uint64_t b) {
  return static_cast<unsigned>(std::popcount(a ^ b));
}

}  // namespace mocr::render

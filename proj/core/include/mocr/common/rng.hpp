#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace mocr::rng {

/// SplitMix64 step. Stateless helper for deriving well-mixed seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Seed for substream `index` of a master seed. Substreams are independent of
/// each other and of evaluation order, so parallel consumers stay deterministic.
constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 1));
}

/// Uniform draw from [0, n) by rejection sampling on the raw 64-bit output.
/// Unlike std::uniform_int_distribution this is pinned across platforms.
template <typename Engine>
std::uint64_t bounded(Engine& engine, std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % n;
  std::uint64_t draw;
  do {
    draw = engine();
  } while (draw >= limit);
  return draw % n;
}

/// Fisher-Yates shuffle driven by `bounded`, the documented portable shuffle
/// used by bootstrap resampling and sampled pairing.
template <typename T, typename Engine>
void fisher_yates(std::span<T> items, Engine& engine) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(bounded(engine, i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

inline std::mt19937_64 make_engine(std::uint64_t seed) { return std::mt19937_64(seed); }

}  // namespace mocr::rng

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mocr/elo/elo.hpp"
#include "mocr/render/bitmap.hpp"

namespace acceptance {

// Independent re-implementations of the published algorithms, written from
// the formulas rather than from the library code. They exist so the suite
// can compare the production results against a second derivation.

/// Brute-force sequential Elo replay over a flat rating map.
std::map<std::string, double> naive_replay(const std::vector<mocr::elo::BattleOutcome>& battles,
                                           const mocr::elo::EloConfig& config);

/// Direct two-index DCT perceptual hash (no separable passes).
std::uint64_t reference_phash(const mocr::render::Bitmap& bitmap);

}  // namespace acceptance

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mocr::elo {

/// Rating-system parameters. `k_factor` scales each update step; `scale` is
/// the logistic divisor in the expected-score curve.
struct EloConfig {
  double initial_rating = 1000.0;
  double k_factor = 32.0;
  double scale = 400.0;
};

/// One resolved battle. `score_a` is 1 when model_a won, 0.5 for a tie,
/// 0 when model_b won; no other values are legal.
struct BattleOutcome {
  std::string model_a;
  std::string model_b;
  double score_a = 0.5;
};

using RatingTable = std::map<std::string, double>;

/// Distribution of one model's final rating over shuffled replays.
/// Bounds are the 2.5th and 97.5th percentiles.
struct ModelDistribution {
  double mean = 0.0;
  double stddev = 0.0;
  double percentile_low = 0.0;
  double percentile_high = 0.0;
};

struct BootstrapResult {
  std::map<std::string, ModelDistribution> models;
  std::uint32_t iterations = 0;
  std::uint64_t seed = 0;
};

/// Probability that a player rated `r_a` beats one rated `r_b`:
/// 1 / (1 + 10^((r_b - r_a) / scale)). Rejects non-finite input.
double expected_score(double r_a, double r_b, double scale = 400.0);

/// Post-battle ratings for both sides. The pair sums to r_a + r_b exactly:
/// both sides move by one shared delta K * (score_a - E_A).
std::pair<double, double> update(double r_a, double r_b, double score_a, const EloConfig& config);

/// Sequential replay in the given order. Models are entered at
/// `initial_rating` when first seen; `preregistered` models get an entry even
/// if they never battle.
RatingTable replay(std::span<const BattleOutcome> battles, const EloConfig& config,
                   std::span<const std::string> preregistered = {});

/// Replays `iterations` independent uniform permutations of the full battle
/// history, each from fresh initial ratings, and aggregates per-model final
/// ratings. Deterministic for a given seed; iteration i draws its permutation
/// from substream i of the seed.
BootstrapResult bootstrap(std::span<const BattleOutcome> battles, const EloConfig& config,
                          std::uint32_t iterations, std::uint64_t seed);

}  // namespace mocr::elo

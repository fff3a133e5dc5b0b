#include "mocr/elo/elo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "mocr/common/rng.hpp"

namespace mocr::elo {

namespace {

bool legal_score(double s) { return s == 0.0 || s == 0.5 || s == 1.0; }

void check_config(const EloConfig& config) {
  if (!(config.k_factor > 0.0)) throw std::invalid_argument("elo: k_factor must be > 0");
  if (!(config.scale > 0.0)) throw std::invalid_argument("elo: scale must be > 0");
  if (!std::isfinite(config.initial_rating)) {
    throw std::invalid_argument("elo: initial_rating must be finite");
  }
}

/// Percentile by linear interpolation over the sorted sample.
double percentile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double rank = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(rank);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = rank - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

double expected_score(double r_a, double r_b, double scale) {
  if (!std::isfinite(r_a) || !std::isfinite(r_b)) {
    throw std::invalid_argument("expected_score: ratings must be finite");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("expected_score: scale must be finite and > 0");
  }
  return 1.0 / (1.0 + std::pow(10.0, (r_b - r_a) / scale));
}

std::pair<double, double> update(double r_a, double r_b, double score_a, const EloConfig& config) {
  check_config(config);
  if (!legal_score(score_a)) {
    throw std::invalid_argument("update: score_a must be one of 0, 0.5, 1");
  }
  const double expected = expected_score(r_a, r_b, config.scale);
  // One shared delta; K*((1-S_A) - (1-E_A)) is the same quantity negated.
  const double delta = config.k_factor * (score_a - expected);
  return {r_a + delta, r_b - delta};
}

RatingTable replay(std::span<const BattleOutcome> battles, const EloConfig& config,
                   std::span<const std::string> preregistered) {
  check_config(config);
  RatingTable table;
  for (const auto& model : preregistered) table.emplace(model, config.initial_rating);
  for (const auto& battle : battles) {
    if (battle.model_a == battle.model_b) {
      throw std::invalid_argument("replay: battle pairs a model with itself: " + battle.model_a);
    }
    if (!legal_score(battle.score_a)) {
      throw std::invalid_argument("replay: score_a must be one of 0, 0.5, 1");
    }
    auto a = table.try_emplace(battle.model_a, config.initial_rating).first;
    auto b = table.try_emplace(battle.model_b, config.initial_rating).first;
    const auto [next_a, next_b] = update(a->second, b->second, battle.score_a, config);
    a->second = next_a;
    b->second = next_b;
  }
  return table;
}

BootstrapResult bootstrap(std::span<const BattleOutcome> battles, const EloConfig& config,
                          std::uint32_t iterations, std::uint64_t seed) {
  check_config(config);
  if (iterations < 1) throw std::invalid_argument("bootstrap: iterations must be >= 1");

  // Compact model ids to indices once; the per-iteration loop touches no strings.
  std::vector<std::string> models;
  std::unordered_map<std::string, std::size_t> index;
  struct CompactBattle {
    std::size_t a, b;
    double score_a;
  };
  std::vector<CompactBattle> compact;
  compact.reserve(battles.size());
  auto intern = [&](const std::string& name) {
    auto [it, inserted] = index.try_emplace(name, models.size());
    if (inserted) models.push_back(name);
    return it->second;
  };
  for (const auto& battle : battles) {
    if (battle.model_a == battle.model_b) {
      throw std::invalid_argument("bootstrap: battle pairs a model with itself: " + battle.model_a);
    }
    if (!legal_score(battle.score_a)) {
      throw std::invalid_argument("bootstrap: score_a must be one of 0, 0.5, 1");
    }
    const std::size_t a = intern(battle.model_a);
    const std::size_t b = intern(battle.model_b);
    compact.push_back({a, b, battle.score_a});
  }

  std::vector<std::vector<double>> samples(models.size());
  for (auto& s : samples) s.resize(iterations);

  std::vector<std::size_t> order(compact.size());
  std::vector<double> ratings;
  for (std::uint32_t iter = 0; iter < iterations; ++iter) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto engine = rng::make_engine(rng::substream_seed(seed, iter));
    rng::fisher_yates(std::span<std::size_t>(order), engine);

    ratings.assign(models.size(), config.initial_rating);
    for (std::size_t k : order) {
      const CompactBattle& battle = compact[k];
      const auto [next_a, next_b] =
          update(ratings[battle.a], ratings[battle.b], battle.score_a, config);
      ratings[battle.a] = next_a;
      ratings[battle.b] = next_b;
    }
    for (std::size_t m = 0; m < models.size(); ++m) samples[m][iter] = ratings[m];
  }

  BootstrapResult result;
  result.iterations = iterations;
  result.seed = seed;
  for (std::size_t m = 0; m < models.size(); ++m) {
    auto& sample = samples[m];
    const double n = static_cast<double>(sample.size());
    const double mean = std::accumulate(sample.begin(), sample.end(), 0.0) / n;
    double sq = 0.0;
    for (double v : sample) sq += (v - mean) * (v - mean);
    ModelDistribution dist;
    dist.mean = mean;
    dist.stddev = std::sqrt(sq / n);
    std::sort(sample.begin(), sample.end());
    dist.percentile_low = percentile(sample, 0.025);
    dist.percentile_high = percentile(sample, 0.975);
    // Type invariant: percentile_low <= mean <= percentile_high. Summation
    // rounding can land the mean an ulp outside on degenerate distributions.
    dist.mean = std::clamp(dist.mean, dist.percentile_low, dist.percentile_high);
    result.models.emplace(models[m], dist);
  }
  return result;
}

}  // namespace mocr::elo

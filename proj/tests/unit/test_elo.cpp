#include <doctest.h>

#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mocr/common/rng.hpp"
#include "mocr/elo/elo.hpp"

using namespace mocr;
using elo::BattleOutcome;
using elo::EloConfig;

namespace {

// Independent brute-force replay. Kept deliberately separate from the library
// implementation; same arithmetic (shared delta) so equality is bit-for-bit.
std::map<std::string, double> oracle_replay(const std::vector<BattleOutcome>& battles,
                                            const EloConfig& cfg) {
  std::map<std::string, double> ratings;
  for (const auto& b : battles) {
    if (!ratings.count(b.model_a)) ratings[b.model_a] = cfg.initial_rating;
    if (!ratings.count(b.model_b)) ratings[b.model_b] = cfg.initial_rating;
    const double ra = ratings[b.model_a];
    const double rb = ratings[b.model_b];
    const double ea = 1.0 / (1.0 + std::pow(10.0, (rb - ra) / cfg.scale));
    const double delta = cfg.k_factor * (b.score_a - ea);
    ratings[b.model_a] = ra + delta;
    ratings[b.model_b] = rb - delta;
  }
  return ratings;
}

std::vector<BattleOutcome> random_history(std::mt19937_64& eng, std::size_t max_models,
                                          std::size_t max_battles) {
  const std::size_t n_models = 2 + rng::bounded(eng, max_models - 1);
  const std::size_t n_battles = 1 + rng::bounded(eng, max_battles);
  std::vector<BattleOutcome> battles;
  battles.reserve(n_battles);
  for (std::size_t i = 0; i < n_battles; ++i) {
    const std::size_t a = rng::bounded(eng, n_models);
    std::size_t b = rng::bounded(eng, n_models - 1);
    if (b >= a) ++b;
    const double scores[3] = {0.0, 0.5, 1.0};
    battles.push_back({"m" + std::to_string(a), "m" + std::to_string(b),
                       scores[rng::bounded(eng, 3)]});
  }
  return battles;
}

}  // namespace

TEST_SUITE("elo") {

TEST_CASE("expected score closed forms") {
  CHECK(elo::expected_score(1000, 1000, 400) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(elo::expected_score(1400, 1000, 400) - 10.0 / 11.0) < 1e-12);
  CHECK(std::abs(elo::expected_score(1000, 1400, 400) - 1.0 / 11.0) < 1e-12);
}

TEST_CASE("expected score complementarity") {
  std::mt19937_64 eng(7);
  for (int i = 0; i < 200; ++i) {
    const double ra = 600.0 + static_cast<double>(rng::bounded(eng, 1000));
    const double rb = 600.0 + static_cast<double>(rng::bounded(eng, 1000));
    CHECK(std::abs(elo::expected_score(ra, rb) + elo::expected_score(rb, ra) - 1.0) <= 1e-12);
  }
}

TEST_CASE("expected score strictly increasing in r_a") {
  double prev = 0.0;
  for (double ra = 500; ra <= 1500; ra += 10) {
    const double e = elo::expected_score(ra, 1000, 400);
    CHECK(e > prev);
    CHECK(e > 0.0);
    CHECK(e < 1.0);
    prev = e;
  }
}

TEST_CASE("expected score rejects bad input") {
  CHECK_THROWS_AS(elo::expected_score(std::nan(""), 1000, 400), std::invalid_argument);
  CHECK_THROWS_AS(elo::expected_score(1000, std::numeric_limits<double>::infinity(), 400),
                  std::invalid_argument);
  CHECK_THROWS_AS(elo::expected_score(1000, 1000, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(elo::expected_score(1000, 1000, -400), std::invalid_argument);
}

TEST_CASE("update at equal ratings") {
  const EloConfig cfg;
  SUBCASE("win moves exactly K/2") {
    const auto [ra, rb] = elo::update(1000, 1000, 1.0, cfg);
    CHECK(ra == 1016.0);
    CHECK(rb == 984.0);
  }
  SUBCASE("tie is a fixed point") {
    const auto [ra, rb] = elo::update(1000, 1000, 0.5, cfg);
    CHECK(ra == 1000.0);
    CHECK(rb == 1000.0);
  }
}

TEST_CASE("update after asymmetric ratings matches high-precision oracle") {
  // E_A = 1/(1+10^(-32/400)) evaluated in extended precision, then both
  // update formulas applied.
  const long double ea = 1.0L / (1.0L + std::pow(10.0L, -32.0L / 400.0L));
  const long double exp_a = 1016.0L + 32.0L * (1.0L - ea);
  const long double exp_b = 984.0L - 32.0L * (1.0L - ea);
  const auto [ra, rb] = elo::update(1016, 984, 1.0, EloConfig{});
  CHECK(std::abs(ra - static_cast<double>(exp_a)) < 1e-9);
  CHECK(std::abs(rb - static_cast<double>(exp_b)) < 1e-9);
  CHECK(ra == doctest::Approx(1030.530).epsilon(1e-6));
  CHECK(rb == doctest::Approx(969.469).epsilon(1e-6));
}

TEST_CASE("update rejects illegal scores") {
  CHECK_THROWS_AS(elo::update(1000, 1000, 0.7, EloConfig{}), std::invalid_argument);
  CHECK_THROWS_AS(elo::update(1000, 1000, -1.0, EloConfig{}), std::invalid_argument);
}

TEST_CASE("update conserves the rating sum") {
  std::mt19937_64 eng(11);
  for (int i = 0; i < 500; ++i) {
    const double ra = 700.0 + static_cast<double>(rng::bounded(eng, 600));
    const double rb = 700.0 + static_cast<double>(rng::bounded(eng, 600));
    const double scores[3] = {0.0, 0.5, 1.0};
    const auto [na, nb] = elo::update(ra, rb, scores[rng::bounded(eng, 3)], EloConfig{});
    CHECK(na + nb == ra + rb);
  }
}

TEST_CASE("replay: empty history with preregistered models") {
  const std::vector<std::string> models = {"A", "B"};
  const auto table = elo::replay({}, EloConfig{}, models);
  REQUIRE(table.size() == 2);
  CHECK(table.at("A") == 1000.0);
  CHECK(table.at("B") == 1000.0);
}

TEST_CASE("replay: single battle") {
  const std::vector<BattleOutcome> battles = {{"A", "B", 1.0}};
  const auto table = elo::replay(battles, EloConfig{});
  CHECK(table.at("A") == 1016.0);
  CHECK(table.at("B") == 984.0);
}

TEST_CASE("replay: order matters, hand-replayed two battles") {
  // After A beats B (1016/984), B beats A. E_B = 1/(1+10^((1016-984)/400)),
  // so B gains 32 * (1 - E_B) ~= 17.469.
  const std::vector<BattleOutcome> battles = {{"A", "B", 1.0}, {"B", "A", 1.0}};
  const auto table = elo::replay(battles, EloConfig{});
  const long double eb = 1.0L / (1.0L + std::pow(10.0L, (1016.0L - 984.0L) / 400.0L));
  const long double exp_b = 984.0L + 32.0L * (1.0L - eb);
  const long double exp_a = 1016.0L - 32.0L * (1.0L - eb);
  CHECK(std::abs(table.at("A") - static_cast<double>(exp_a)) < 1e-9);
  CHECK(std::abs(table.at("B") - static_cast<double>(exp_b)) < 1e-9);
  CHECK(table.at("A") == doctest::Approx(998.530).epsilon(1e-6));
  CHECK(table.at("B") == doctest::Approx(1001.469).epsilon(1e-6));
}

TEST_CASE("replay rejects self-battles") {
  const std::vector<BattleOutcome> battles = {{"A", "A", 1.0}};
  CHECK_THROWS_AS(elo::replay(battles, EloConfig{}), std::invalid_argument);
}

TEST_CASE("replay matches brute-force oracle bit-for-bit") {
  std::mt19937_64 eng(2024);
  for (int run = 0; run < 25; ++run) {
    const auto battles = random_history(eng, 5, 50);
    const auto got = elo::replay(battles, EloConfig{});
    const auto want = oracle_replay(battles, EloConfig{});
    REQUIRE(got.size() == want.size());
    for (const auto& [model, rating] : want) {
      CHECK(got.at(model) == rating);
    }
  }
}

TEST_CASE("replay conserves total rating") {
  std::mt19937_64 eng(99);
  const auto battles = random_history(eng, 5, 1000);
  const auto table = elo::replay(battles, EloConfig{});
  double sum = 0.0;
  for (const auto& [_, r] : table) sum += r;
  const double expected = 1000.0 * static_cast<double>(table.size());
  CHECK(std::abs(sum - expected) <= 1e-9 * expected);
}

TEST_CASE("bootstrap is reproducible for a fixed seed") {
  std::mt19937_64 eng(5);
  const auto battles = random_history(eng, 4, 60);
  const auto first = elo::bootstrap(battles, EloConfig{}, 50, 123);
  const auto second = elo::bootstrap(battles, EloConfig{}, 50, 123);
  REQUIRE(first.models.size() == second.models.size());
  for (const auto& [model, dist] : first.models) {
    const auto& other = second.models.at(model);
    CHECK(dist.mean == other.mean);
    CHECK(dist.stddev == other.stddev);
    CHECK(dist.percentile_low == other.percentile_low);
    CHECK(dist.percentile_high == other.percentile_high);
  }
  const auto different_seed = elo::bootstrap(battles, EloConfig{}, 50, 124);
  bool any_diff = false;
  for (const auto& [model, dist] : first.models) {
    if (dist.mean != different_seed.models.at(model).mean) any_diff = true;
  }
  CHECK(any_diff);
}

TEST_CASE("bootstrap with one iteration equals one shuffled replay") {
  std::mt19937_64 eng(6);
  const auto battles = random_history(eng, 3, 30);
  const std::uint64_t seed = 77;
  const auto result = elo::bootstrap(battles, EloConfig{}, 1, seed);

  // Reconstruct the documented permutation: Fisher-Yates on substream 0.
  std::vector<std::size_t> order(battles.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto perm_engine = rng::make_engine(rng::substream_seed(seed, 0));
  rng::fisher_yates(std::span<std::size_t>(order), perm_engine);
  std::vector<BattleOutcome> shuffled;
  for (std::size_t k : order) shuffled.push_back(battles[k]);
  const auto table = elo::replay(shuffled, EloConfig{});

  for (const auto& [model, dist] : result.models) {
    CHECK(dist.mean == table.at(model));
    CHECK(dist.stddev == 0.0);
    CHECK(dist.percentile_low == dist.mean);
    CHECK(dist.percentile_high == dist.mean);
  }
}

TEST_CASE("bootstrap over all-tie history is exactly flat") {
  std::vector<BattleOutcome> battles;
  for (int i = 0; i < 40; ++i) battles.push_back({"A", "B", 0.5});
  const auto result = elo::bootstrap(battles, EloConfig{}, 200, 9);
  for (const auto& [model, dist] : result.models) {
    CHECK(dist.mean == 1000.0);
    CHECK(dist.stddev == 0.0);
    CHECK(dist.percentile_low == 1000.0);
    CHECK(dist.percentile_high == 1000.0);
  }
}

TEST_CASE("bootstrap: dominant model ranks above, sum conserved") {
  std::vector<BattleOutcome> battles;
  for (int i = 0; i < 100; ++i) battles.push_back({"A", "B", 1.0});
  const auto result = elo::bootstrap(battles, EloConfig{}, 300, 42);
  const auto& a = result.models.at("A");
  const auto& b = result.models.at("B");
  CHECK(a.mean > 1000.0);
  CHECK(b.mean < 1000.0);
  CHECK(std::abs(a.mean + b.mean - 2000.0) < 1e-6);
  CHECK(a.percentile_low <= a.mean);
  CHECK(a.mean <= a.percentile_high);
}

TEST_CASE("bootstrap rejects zero iterations") {
  const std::vector<BattleOutcome> battles = {{"A", "B", 1.0}};
  CHECK_THROWS_AS(elo::bootstrap(battles, EloConfig{}, 0, 1), std::invalid_argument);
}

}  // TEST_SUITE

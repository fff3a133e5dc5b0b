#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "mocr/common/rng.hpp"
#include "mocr/elo/elo.hpp"

namespace {

std::vector<mocr::elo::BattleOutcome> make_history(std::size_t battles, std::size_t models) {
  std::mt19937_64 eng(17);
  std::vector<mocr::elo::BattleOutcome> out;
  out.reserve(battles);
  for (std::size_t i = 0; i < battles; ++i) {
    const std::size_t a = mocr::rng::bounded(eng, models);
    std::size_t b = mocr::rng::bounded(eng, models - 1);
    if (b >= a) ++b;
    const double scores[3] = {0.0, 0.5, 1.0};
    out.push_back({"model-" + std::to_string(a), "model-" + std::to_string(b),
                   scores[mocr::rng::bounded(eng, 3)]});
  }
  return out;
}

void BM_EloReplay(benchmark::State& state) {
  const auto battles = make_history(static_cast<std::size_t>(state.range(0)), 8);
  for (auto _ : state) {
    auto table = mocr::elo::replay(battles, mocr::elo::EloConfig{});
    benchmark::DoNotOptimize(table);
  }
}
BENCHMARK(BM_EloReplay)->Arg(1000)->Arg(10000);

void BM_EloBootstrap(benchmark::State& state) {
  const auto battles = make_history(1000, 8);
  for (auto _ : state) {
    auto result = mocr::elo::bootstrap(battles, mocr::elo::EloConfig{},
                                       static_cast<std::uint32_t>(state.range(0)), 7);
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_EloBootstrap)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();

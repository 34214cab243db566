#include <benchmark/benchmark.h>

#include "ompli/controller.hpp"
#include "ompli/harness.hpp"

namespace {

ompli::ScenarioConfig scenario(const char* id) {
  return ompli::case_preset(id);
}

void BM_MppiStep(benchmark::State& state) {
  ompli::ScenarioConfig cfg = scenario("2");
  cfg.setup.mppi.rollouts = static_cast<int>(state.range(0));
  std::vector<ompli::ObstacleState> obstacles{
      cfg.obstacles.front().resolve(cfg.setup.track)};
  const ompli::ControlSequence mean(
      static_cast<std::size_t>(cfg.setup.mppi.horizon_steps),
      cfg.setup.mppi.initial_mean);
  std::uint64_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ompli::mppi_step(cfg.initial_state, mean,
                                              obstacles, cfg.setup, 1, k++));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) *
                          cfg.setup.mppi.horizon_steps);
}
BENCHMARK(BM_MppiStep)->Arg(50)->Arg(500);

void BM_OmpliStep(benchmark::State& state) {
  ompli::ScenarioConfig cfg = scenario("1");
  cfg.setup.mppi.rollouts = static_cast<int>(state.range(0));
  std::vector<ompli::ObstacleState> obstacles{
      cfg.obstacles.front().resolve(cfg.setup.track)};
  std::uint64_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ompli::ompli_step(cfg.initial_state, obstacles, cfg.setup, 1, k++));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) *
                          cfg.setup.mppi.horizon_steps);
}
BENCHMARK(BM_OmpliStep)->Arg(50)->Arg(200);

void BM_ComputeWeights(benchmark::State& state) {
  std::vector<double> costs(2000);
  for (std::size_t i = 0; i < costs.size(); ++i)
    costs[i] = 100.0 + 13.7 * static_cast<double>(i % 97);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ompli::compute_weights(costs, 2.0));
  }
}
BENCHMARK(BM_ComputeWeights);

}  // namespace

BENCHMARK_MAIN();

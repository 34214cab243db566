#include <benchmark/benchmark.h>

#include "ompli/cost.hpp"
#include "ompli/dynamics.hpp"
#include "ompli/track.hpp"

namespace {

void BM_PlantStep(benchmark::State& state) {
  const ompli::DynamicsParams p;
  ompli::BotState s{85.0, -10.0, 1.5707, 15.0, 0.0};
  const ompli::ControlInput u{18.0, 0.3};
  for (auto _ : state) {
    s = ompli::step(s, u, p);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_PlantStep);

void BM_RunningCost(benchmark::State& state) {
  const ompli::TrackSpec track;
  const ompli::CostParams cost;
  const ompli::CollisionGeom geom;
  const ompli::BotState s{85.0, -10.0, 1.5707, 15.0, 0.0};
  const std::vector<ompli::Pose2D> agents{{85.0, 40.0, 1.5707}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ompli::running_cost(s, agents, track, geom, cost));
  }
}
BENCHMARK(BM_RunningCost);

}  // namespace

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "ompli/controller.hpp"
#include "ompli/errors.hpp"
#include "ompli/harness.hpp"
#include "ompli/inverse.hpp"
#include "ompli/rng.hpp"

using namespace ompli;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

ControlSetup default_setup(int rollouts, int horizon_steps) {
  ControlSetup s;
  s.mppi.rollouts = rollouts;
  s.mppi.horizon_steps = horizon_steps;
  return s;
}
}  // namespace

TEST_CASE("compute_weights: closed forms") {
  SUBCASE("equal costs give uniform weights") {
    const std::vector<double> costs{7.0, 7.0, 7.0, 7.0};
    for (double w : compute_weights(costs, 2.0))
      CHECK(w == doctest::Approx(0.25).epsilon(1e-12));
  }
  SUBCASE("costs (0, lambda ln 2) weight 2:1") {
    const double lambda = 2.0;
    const std::vector<double> costs{0.0, lambda * std::log(2.0)};
    const auto w = compute_weights(costs, lambda);
    CHECK(w[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(w[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("adding a constant to every cost changes nothing") {
    const std::vector<double> costs{3.0, 11.0, 4.5};
    std::vector<double> shifted = costs;
    for (double& c : shifted) c += 1234.5;
    const auto a = compute_weights(costs, 2.0);
    const auto b = compute_weights(shifted, 2.0);
    for (std::size_t i = 0; i < a.size(); ++i)
      CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
  }
}

TEST_CASE("compute_weights: properties over random cost vectors") {
  Splitmix64 rng(99);
  for (int iter = 0; iter < 1000; ++iter) {
    const int m = 1 + static_cast<int>(rng() % 64);
    std::vector<double> costs(static_cast<std::size_t>(m));
    for (double& c : costs) c = uniform(rng, 0.0, 5000.0);
    const double lambda = uniform(rng, 0.1, 10.0);

    const auto w = compute_weights(costs, lambda);
    double sum = 0.0;
    std::size_t argmin = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      CHECK(w[i] >= 0.0);
      sum += w[i];
      if (costs[i] < costs[argmin]) argmin = i;
    }
    CHECK(std::abs(sum - 1.0) < 1e-9);
    for (std::size_t i = 0; i < w.size(); ++i) CHECK(w[argmin] >= w[i]);

    // shift invariance
    std::vector<double> shifted = costs;
    for (double& c : shifted) c += 777.0;
    const auto w2 = compute_weights(shifted, lambda);
    for (std::size_t i = 0; i < w.size(); ++i)
      CHECK(std::abs(w[i] - w2[i]) < 1e-9);
  }
}

TEST_CASE("compute_weights: lambda -> 0 concentrates on the argmin") {
  const std::vector<double> costs{5.0, 4.0, 9.0, 4.5};
  const auto w = compute_weights(costs, 1e-6);
  CHECK(w[1] == doctest::Approx(1.0));
  CHECK(w[0] == doctest::Approx(0.0));
  CHECK(w[2] == doctest::Approx(0.0));
  CHECK(w[3] == doctest::Approx(0.0));
}

TEST_CASE("compute_weights: non-finite costs are rejected, all bad throws") {
  const std::vector<double> costs{kInf, 2.0, std::nan(""), 2.0};
  const auto w = compute_weights(costs, 2.0);
  CHECK(w[0] == 0.0);
  CHECK(w[2] == 0.0);
  CHECK(w[1] == doctest::Approx(0.5));
  CHECK(w[3] == doctest::Approx(0.5));

  const std::vector<double> bad{kInf, kInf};
  CHECK_THROWS_AS(compute_weights(bad, 2.0), ControllerError);
}

TEST_CASE("warm_start") {
  const ControlInput z{9.0, 0.25};
  SUBCASE("shift semantics") {
    const ControlSequence seq{{1, 0.1}, {2, 0.2}, {3, 0.3}};
    const ControlSequence out = warm_start(seq, z);
    REQUIRE(out.size() == 3);
    CHECK(out[0].v_des == 2);
    CHECK(out[1].v_des == 3);
    CHECK(out[2].v_des == 9.0);
    CHECK(out[2].omega_des == 0.25);
  }
  SUBCASE("sequence already at the initial mean is unchanged") {
    const ControlSequence seq(5, z);
    const ControlSequence out = warm_start(seq, z);
    for (const auto& u : out) {
      CHECK(u.v_des == z.v_des);
      CHECK(u.omega_des == z.omega_des);
    }
  }
  SUBCASE("N=1 resets to the initial mean") {
    const ControlSequence out = warm_start(ControlSequence{{4.0, 0.4}}, z);
    REQUIRE(out.size() == 1);
    CHECK(out[0].v_des == 9.0);
  }
}

TEST_CASE("mppi_step: zero noise collapses to the mean sequence") {
  ControlSetup setup = default_setup(8, 20);
  setup.mppi.noise_var_v = 0.0;
  setup.mppi.noise_var_omega = 0.0;
  const BotState state{85.0, -10.0, kPi / 2.0, 15.0, 0.0};
  const ControlSequence mean(20, ControlInput{15.0, 0.0});
  const auto d = mppi_step(state, mean, {}, setup, 3, 0);
  for (const auto& u : d.optimized) {
    CHECK(u.v_des == doctest::Approx(15.0).epsilon(1e-12));
    CHECK(u.omega_des == doctest::Approx(0.0));
  }
  CHECK(d.applied.v_des == d.optimized.front().v_des);
  CHECK(d.diagnostics.effective_samples == doctest::Approx(8.0));
}

TEST_CASE("mppi_step: M=1 equals the composed public operations") {
  const ControlSetup setup = default_setup(1, 30);
  const BotState state{85.0, -10.0, kPi / 2.0, 15.0, 0.0};
  const std::vector<ObstacleState> obstacles{{LaneId::Outer, 50.0, 10.0}};
  const ControlSequence mean(30, setup.mppi.initial_mean);

  const auto d = mppi_step(state, mean, obstacles, setup, 42, 7);

  // Recreate the single rollout through the public pieces.
  const Rollout r = generate_mppi_rollout(state, mean, setup, 42, 7, 0);
  REQUIRE(d.optimized.size() == r.inputs.size());
  for (std::size_t k = 0; k < r.inputs.size(); ++k) {
    CHECK(d.optimized[k].v_des == doctest::Approx(r.inputs[k].v_des).epsilon(1e-12));
    CHECK(d.optimized[k].omega_des ==
          doctest::Approx(r.inputs[k].omega_des).epsilon(1e-12));
  }

  // Cost agrees with trajectory_cost over time-aligned predictions.
  auto rows = predict_obstacles(obstacles, 31, setup.dynamics.dt, setup.track);
  rows.erase(rows.begin());  // align rows with post-step states 1..N
  const double want =
      trajectory_cost(r.states, rows, setup.track, setup.collision, setup.cost);
  CHECK(d.diagnostics.min_cost == doctest::Approx(want).epsilon(1e-12));
  CHECK(d.weights[0] == doctest::Approx(1.0));
}

TEST_CASE("mppi_step: fixed seed reproduces the decision bit for bit") {
  const ControlSetup setup = default_setup(32, 25);
  const BotState state{85.0, -10.0, kPi / 2.0, 15.0, 0.0};
  const std::vector<ObstacleState> obstacles{{LaneId::Outer, 50.0, 10.0}};
  const ControlSequence mean(25, setup.mppi.initial_mean);

  const auto a = mppi_step(state, mean, obstacles, setup, 11, 5);
  const auto b = mppi_step(state, mean, obstacles, setup, 11, 5);
  REQUIRE(a.optimized.size() == b.optimized.size());
  for (std::size_t k = 0; k < a.optimized.size(); ++k) {
    CHECK(a.optimized[k].v_des == b.optimized[k].v_des);
    CHECK(a.optimized[k].omega_des == b.optimized[k].omega_des);
  }
  const auto c = mppi_step(state, mean, obstacles, setup, 12, 5);
  bool same = true;
  for (std::size_t k = 0; k < a.optimized.size(); ++k)
    same = same && a.optimized[k].v_des == c.optimized[k].v_des;
  CHECK_FALSE(same);
}

TEST_CASE("mppi_step: rollout states satisfy the saturation bounds") {
  const ControlSetup setup = default_setup(16, 40);
  const BotState state{85.0, -10.0, kPi / 2.0, 15.0, 0.0};
  const ControlSequence mean(40, ControlInput{40.0, 3.5});  // beyond bounds
  for (int m = 0; m < 16; ++m) {
    const Rollout r = generate_mppi_rollout(state, mean, setup, 5, 0,
                                            static_cast<std::uint64_t>(m));
    for (const auto& s : r.states) {
      CHECK(std::abs(s.v) <= setup.dynamics.v_max);
      CHECK(std::abs(s.omega) <= setup.dynamics.omega_max);
    }
  }
}

TEST_CASE("ompli_step: M=1 returns the single inverse input sequence") {
  const ControlSetup setup = default_setup(1, 50);
  const BotState state{85.0, -10.0, kPi / 2.0, 15.0, 0.0};
  const std::vector<ObstacleState> obstacles{{LaneId::Outer, 50.0, 10.0}};

  const auto d = ompli_step(state, obstacles, setup, 21, 4);

  // Reproduce the rollout with the same substream.
  Splitmix64 rng = substream(21, 4, 0);
  const double T = setup.mppi.horizon_seconds(setup.dynamics.dt);
  const RegionOfInterest roi =
      build_roi(state, T, setup.dynamics, setup.track, setup.roi);
  const auto [xe, ye] =
      sample_endpoint(roi, setup.track, rng, setup.roi.max_rejections);
  const double he = endpoint_heading(xe, ye, setup.track);
  const OutputTrajectory traj = fit_spline(state, xe, ye, he, T, 50);
  const InverseResult inv = invert_trajectory(traj, state, setup.dynamics);

  REQUIRE(d.optimized.size() == inv.inputs.size());
  for (std::size_t k = 0; k < inv.inputs.size(); ++k) {
    CHECK(d.optimized[k].v_des ==
          doctest::Approx(inv.inputs[k].v_des).epsilon(1e-12));
    CHECK(d.optimized[k].omega_des ==
          doctest::Approx(inv.inputs[k].omega_des).epsilon(1e-12));
  }
  CHECK(d.weights[0] == doctest::Approx(1.0));
}

TEST_CASE("ompli_step: fixed seed reproducibility and weight sanity") {
  const ControlSetup setup = default_setup(40, 50);
  const BotState state{85.0, -10.0, kPi / 2.0, 15.0, 0.0};
  const std::vector<ObstacleState> obstacles{{LaneId::Outer, 50.0, 10.0}};

  const auto a = ompli_step(state, obstacles, setup, 2, 0);
  const auto b = ompli_step(state, obstacles, setup, 2, 0);
  for (std::size_t k = 0; k < a.optimized.size(); ++k) {
    CHECK(a.optimized[k].v_des == b.optimized[k].v_des);
    CHECK(a.optimized[k].omega_des == b.optimized[k].omega_des);
  }
  double sum = 0.0;
  for (double w : a.weights) sum += w;
  CHECK(std::abs(sum - 1.0) < 1e-9);
  CHECK(a.diagnostics.rejected == 0);
  CHECK(a.applied.v_des == a.optimized.front().v_des);
}

TEST_CASE("parameter validation") {
  MppiParams p;
  p.rollouts = 0;
  CHECK_THROWS(p.validate());
  p = MppiParams{};
  p.lambda = 0.0;
  CHECK_THROWS(p.validate());
  CHECK_NOTHROW(MppiParams{}.validate());
}

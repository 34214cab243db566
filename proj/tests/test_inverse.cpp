#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ompli/dynamics.hpp"
#include "ompli/inverse.hpp"
#include "ompli/planner.hpp"
#include "test_support.hpp"

using namespace ompli;

namespace {
constexpr double kPi = std::numbers::pi;
const DynamicsParams kDyn{};

// Output trajectory tracing a circle of the given radius at constant speed;
// heading grows linearly, which makes the discrete angular rate exact.
OutputTrajectory circle_trajectory(double radius, double speed, double theta0,
                                   int n, double dt) {
  OutputTrajectory traj;
  traj.dt = dt;
  traj.samples.resize(static_cast<std::size_t>(n));
  const double rate = speed / radius;
  for (int j = 1; j <= n; ++j) {
    const double t = j * dt;
    const double th = theta0 + rate * t;
    auto& s = traj.samples[static_cast<std::size_t>(j - 1)];
    s.x = radius * std::sin(th);
    s.y = -radius * std::cos(th);
    s.xd = speed * std::cos(th);
    s.yd = speed * std::sin(th);
  }
  return traj;
}
}  // namespace

TEST_CASE("planned_kinematics: constant-velocity straight line") {
  const double v = 12.0, T = 2.0;
  const int n = 50;
  const BotState state{85.0, -10.0, kPi / 2.0, v, 0.0};
  const OutputTrajectory traj =
      fit_spline(state, 85.0, -10.0 + v * T, kPi / 2.0, T, n);
  const PlannedKinematics pk = planned_kinematics(traj, state, n, traj.dt);

  REQUIRE(pk.v.size() == n + 1);
  for (int j = 0; j <= n; ++j) {
    CHECK(pk.v[j] == doctest::Approx(v).epsilon(1e-9));
    CHECK(pk.theta[j] == doctest::Approx(kPi / 2.0).epsilon(1e-9));
    if (j >= 1) CHECK(std::abs(pk.omega[j]) < 1e-7);
  }
  CHECK(pk.omega[0] == 0.0);  // measured rate at the first grid point
}

TEST_CASE("planned_kinematics: circular arc recovers v/rho exactly") {
  const double radius = 55.0, speed = 15.0;
  const int n = 200;  // enough to wrap the heading past pi
  const double theta0 = kPi / 2.0;
  const OutputTrajectory traj =
      circle_trajectory(radius, speed, theta0, n, 0.04);
  const BotState state{radius, 0.0, theta0, speed, speed / radius};
  const PlannedKinematics pk = planned_kinematics(traj, state, n, 0.04);

  const double rate = speed / radius;
  for (int j = 1; j <= n; ++j) {
    CHECK(pk.omega[j] == doctest::Approx(rate).epsilon(1e-9));
    CHECK(pk.v[j] == doctest::Approx(speed).epsilon(1e-12));
    // unwrapped: linear growth, no 2*pi jumps
    CHECK(pk.theta[j] == doctest::Approx(theta0 + rate * j * 0.04));
  }
}

TEST_CASE("planned_kinematics: stationary trajectory holds the heading") {
  const BotState state{10.0, 20.0, 0.7, 0.0, 0.0};
  const OutputTrajectory traj = fit_spline(state, 10.0, 20.0, 0.7, 2.0, 50);
  const PlannedKinematics pk = planned_kinematics(traj, state, 50, traj.dt);
  for (int j = 0; j <= 50; ++j) {
    CHECK(pk.v[j] == doctest::Approx(0.0));
    CHECK(pk.theta[j] == doctest::Approx(0.7));
    CHECK(std::isfinite(pk.omega[j]));
    CHECK(pk.omega[j] == doctest::Approx(0.0));
  }
}

TEST_CASE("inverse_inputs: closed-form examples") {
  SUBCASE("constant plan is a fixed point") {
    PlannedKinematics pk;
    pk.v = {15.0, 15.0, 15.0};
    pk.omega = {0.0, 0.0, 0.0};
    pk.theta = {0.0, 0.0, 0.0};
    const auto inputs = inverse_inputs(pk, kDyn.alpha, kDyn.dt);
    REQUIRE(inputs.size() == 2);
    for (const auto& u : inputs) {
      CHECK(u.v_des == doctest::Approx(15.0));
      CHECK(u.omega_des == doctest::Approx(0.0));
    }
  }

  SUBCASE("single difference: 2/(alpha dt) + 10 = 14.375") {
    PlannedKinematics pk;
    pk.v = {10.0, 12.0};
    pk.omega = {0.0, 0.0};
    pk.theta = {0.0, 0.0};
    const auto inputs = inverse_inputs(pk, 4.0 / 0.35, 0.04);
    REQUIRE(inputs.size() == 1);
    CHECK(inputs[0].v_des == doctest::Approx(14.375).epsilon(1e-12));
  }

  SUBCASE("linear ramp maps to a constant offset above the ramp") {
    PlannedKinematics pk;
    const double slope = 0.8;
    for (int j = 0; j <= 10; ++j) {
      pk.v.push_back(5.0 + slope * j);
      pk.omega.push_back(0.0);
      pk.theta.push_back(0.0);
    }
    const auto inputs = inverse_inputs(pk, kDyn.alpha, kDyn.dt);
    const double offset = slope / (kDyn.alpha * kDyn.dt);
    for (std::size_t j = 0; j < inputs.size(); ++j)
      CHECK(inputs[j].v_des - pk.v[j] == doctest::Approx(offset).epsilon(1e-12));
  }
}

TEST_CASE("velocity-tracking identity: unsaturated recursion reproduces the plan") {
  const auto cases = testsupport::make_inbounds_splines(501, 1000);
  for (const auto& c : cases) {
    const int n = static_cast<int>(c.traj.samples.size());
    const PlannedKinematics pk =
        planned_kinematics(c.traj, c.state, n, c.traj.dt);
    const auto inputs = inverse_inputs(pk, kDyn.alpha, c.traj.dt);

    double v = pk.v[0];
    double w = pk.omega[0];
    const double ad = kDyn.alpha * c.traj.dt;
    for (int j = 0; j < n; ++j) {
      v = v + ad * (inputs[static_cast<std::size_t>(j)].v_des - v);
      w = w + ad * (inputs[static_cast<std::size_t>(j)].omega_des - w);
      const double v_ref = pk.v[static_cast<std::size_t>(j + 1)];
      const double w_ref = pk.omega[static_cast<std::size_t>(j + 1)];
      CHECK(std::abs(v - v_ref) <= 1e-9 * std::max(1.0, std::abs(v_ref)));
      CHECK(std::abs(w - w_ref) <= 1e-9 * std::max(1.0, std::abs(w_ref)));
    }
  }
}

TEST_CASE("invert_trajectory: straight constant-speed rollout") {
  const double v = 15.0, T = 2.0;
  const int n = 50;
  const BotState state{85.0, -10.0, kPi / 2.0, v, 0.0};
  const OutputTrajectory traj =
      fit_spline(state, 85.0, -10.0 + v * T, kPi / 2.0, T, n);
  const InverseResult inv = invert_trajectory(traj, state, kDyn);

  REQUIRE(inv.inputs.size() == n);
  REQUIRE(inv.planned_states.size() == n);
  for (int j = 0; j < n; ++j) {
    CHECK(inv.inputs[j].v_des == doctest::Approx(v).epsilon(1e-9));
    CHECK(std::abs(inv.inputs[j].omega_des) < 1e-6);
    CHECK(inv.planned_states[j].x == doctest::Approx(85.0).epsilon(1e-9));
    CHECK(inv.planned_states[j].y ==
          doctest::Approx(-10.0 + v * (j + 1) * traj.dt).epsilon(1e-9));
    CHECK(inv.planned_states[j].v == doctest::Approx(v).epsilon(1e-9));
  }
}

TEST_CASE("invert_trajectory: N=1") {
  const BotState state{85.0, 0.0, kPi / 2.0, 10.0, 0.0};
  const OutputTrajectory traj = fit_spline(state, 85.0, 30.0, kPi / 2.0, 2.0, 1);
  const InverseResult inv = invert_trajectory(traj, state, kDyn);
  REQUIRE(inv.inputs.size() == 1);
  REQUIRE(inv.planned_states.size() == 1);
  CHECK(inv.planned_states[0].y == doctest::Approx(30.0));
}

TEST_CASE("inverse inputs are not clamped to the plant bounds") {
  PlannedKinematics pk;
  pk.v = {0.0, 30.0};  // demands more than v_max in one step
  pk.omega = {0.0, 0.0};
  pk.theta = {0.0, 0.0};
  const auto inputs = inverse_inputs(pk, kDyn.alpha, kDyn.dt);
  CHECK(inputs[0].v_des > kDyn.v_max);  // 30/(alpha dt) + 0 = 65.6...
}

TEST_CASE("inversion endpoint tracking stays under the frozen bound") {
  // Fresh sample, distinct from the calibration sweep.
  const auto cases = testsupport::make_inbounds_splines(2024, 1000);
  double worst = 0.0;
  for (const auto& c : cases)
    worst = std::max(worst, testsupport::endpoint_tracking_error(c));
  CHECK(worst < testsupport::kInversionTrackingBound);
}

#pragma once

#include <span>
#include <vector>

#include "ompli/track.hpp"

namespace ompli {

/// Bot state. theta is unwrapped (unbounded); x, y in cm, v in cm/s,
/// omega in rad/s.
struct BotState {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
  double v = 0.0;
  double omega = 0.0;
};

/// Desired forward and angular velocity pair.
struct ControlInput {
  double v_des = 0.0;
  double omega_des = 0.0;
};

/// Forward-Euler discretization with first-order velocity tracking at rate
/// alpha and symmetric saturation of both velocities.
struct DynamicsParams {
  double dt = 0.04;          // s
  double alpha = 4.0 / 0.35; // 1/s, settling-time parameter
  double v_max = 22.0;       // cm/s
  double omega_max = 2.8;    // rad/s

  void validate() const;  // throws ConfigError
};

/// bound * sign(value) if |value| > bound, else value. bound >= 0.
double saturate(double value, double bound);

/// One plant step. The position/heading update uses the pre-step velocities.
BotState step(const BotState& state, const ControlInput& u,
              const DynamicsParams& p);

/// Iterated step; element k is the state after applying inputs[0..k].
std::vector<BotState> rollout_forward(const BotState& state,
                                      std::span<const ControlInput> inputs,
                                      const DynamicsParams& p);

/// Constant-speed obstacle riding a lane centerline; s in [0, perimeter).
struct ObstacleState {
  LaneId lane = LaneId::Outer;
  double s = 0.0;      // cm along the lane centerline
  double speed = 0.0;  // cm/s, >= 0
};

ObstacleState obstacle_step(const ObstacleState& o, double dt,
                            const TrackSpec& spec);

Pose2D obstacle_pose(const ObstacleState& o, const TrackSpec& spec);

/// Constant-speed extrapolation: row k holds every obstacle's pose after k
/// steps (row 0 = current poses). steps >= 1 rows.
std::vector<std::vector<Pose2D>> predict_obstacles(
    std::span<const ObstacleState> obstacles, int steps, double dt,
    const TrackSpec& spec);

}  // namespace ompli

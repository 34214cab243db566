#include "ompli/dynamics.hpp"

#include <cmath>

#include "ompli/errors.hpp"

namespace ompli {

void DynamicsParams::validate() const {
  if (!(dt > 0.0)) throw ConfigError("dynamics.dt: must be > 0");
  if (!(alpha > 0.0)) throw ConfigError("dynamics.alpha: must be > 0");
  if (!(v_max > 0.0)) throw ConfigError("dynamics.v_max: must be > 0");
  if (!(omega_max > 0.0)) throw ConfigError("dynamics.omega_max: must be > 0");
}

double saturate(double value, double bound) {
  if (value > bound) return bound;
  if (value < -bound) return -bound;
  return value;
}

BotState step(const BotState& state, const ControlInput& u,
              const DynamicsParams& p) {
  BotState next;
  next.x = state.x + state.v * std::cos(state.theta) * p.dt;
  next.y = state.y + state.v * std::sin(state.theta) * p.dt;
  next.theta = state.theta + state.omega * p.dt;
  next.v = saturate(state.v + p.alpha * (u.v_des - state.v) * p.dt, p.v_max);
  next.omega = saturate(
      state.omega + p.alpha * (u.omega_des - state.omega) * p.dt, p.omega_max);
  return next;
}

std::vector<BotState> rollout_forward(const BotState& state,
                                      std::span<const ControlInput> inputs,
                                      const DynamicsParams& p) {
  std::vector<BotState> states;
  states.reserve(inputs.size());
  BotState cur = state;
  for (const ControlInput& u : inputs) {
    cur = step(cur, u, p);
    states.push_back(cur);
  }
  return states;
}

ObstacleState obstacle_step(const ObstacleState& o, double dt,
                            const TrackSpec& spec) {
  const double perimeter = lane_perimeter(o.lane, spec);
  ObstacleState next = o;
  next.s = std::fmod(o.s + o.speed * dt, perimeter);
  if (next.s < 0.0) next.s += perimeter;
  return next;
}

Pose2D obstacle_pose(const ObstacleState& o, const TrackSpec& spec) {
  return lane_point(o.lane, o.s, spec);
}

std::vector<std::vector<Pose2D>> predict_obstacles(
    std::span<const ObstacleState> obstacles, int steps, double dt,
    const TrackSpec& spec) {
  std::vector<std::vector<Pose2D>> rows(static_cast<std::size_t>(steps));
  std::vector<ObstacleState> cur(obstacles.begin(), obstacles.end());
  for (int k = 0; k < steps; ++k) {
    auto& row = rows[static_cast<std::size_t>(k)];
    row.reserve(cur.size());
    for (auto& o : cur) {
      row.push_back(obstacle_pose(o, spec));
      o = obstacle_step(o, dt, spec);
    }
  }
  return rows;
}

}  // namespace ompli

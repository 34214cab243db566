#pragma once

#include <vector>

#include "ompli/dynamics.hpp"
#include "ompli/planner.hpp"

namespace ompli {

/// Speed, heading and angular velocity implied by an output trajectory,
/// sampled at grid points 0..n (n+1 entries each). theta is unwrapped so
/// consecutive differences lie in [-pi, pi]; omega[0] is the measured rate.
struct PlannedKinematics {
  std::vector<double> v;      // cm/s
  std::vector<double> theta;  // rad, unwrapped
  std::vector<double> omega;  // rad/s
};

PlannedKinematics planned_kinematics(const OutputTrajectory& traj,
                                     const BotState& state, int n_steps,
                                     double dt);

/// Difference-based inversion of the first-order velocity tracking:
/// u[j] = (plan[j+1] - plan[j]) / (alpha dt) + plan[j], per channel.
/// No saturation is applied here; the plant clamps.
std::vector<ControlInput> inverse_inputs(const PlannedKinematics& pk,
                                         double alpha, double dt);

/// inputs[j] drives the plant from grid point j toward j+1;
/// planned_states[j] is the trajectory's own state at grid point j+1 (the
/// states a rollout is costed on).
struct InverseResult {
  std::vector<ControlInput> inputs;
  std::vector<BotState> planned_states;
};

InverseResult invert_trajectory(const OutputTrajectory& traj,
                                const BotState& state,
                                const DynamicsParams& p);

}  // namespace ompli

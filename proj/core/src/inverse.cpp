#include "ompli/inverse.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ompli {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Below this speed the heading of the velocity vector is numerically
// meaningless; hold the previous value instead.
constexpr double kHeadingSpeedEps = 1e-9;
}  // namespace

PlannedKinematics planned_kinematics(const OutputTrajectory& traj,
                                     const BotState& state, int n_steps,
                                     double dt) {
  if (n_steps < 1 ||
      traj.samples.size() < static_cast<std::size_t>(n_steps))
    throw std::invalid_argument("planned_kinematics: horizon underflow");

  const std::size_t n = static_cast<std::size_t>(n_steps);
  PlannedKinematics pk;
  pk.v.resize(n + 1);
  pk.theta.resize(n + 1);
  pk.omega.resize(n + 1);

  pk.v[0] = std::abs(state.v);
  pk.theta[0] = state.theta;
  pk.omega[0] = state.omega;

  for (std::size_t j = 1; j <= n; ++j) {
    const OutputSample& s = traj.samples[j - 1];
    pk.v[j] = std::sqrt(s.xd * s.xd + s.yd * s.yd);
    if (pk.v[j] < kHeadingSpeedEps) {
      pk.theta[j] = pk.theta[j - 1];
    } else {
      const double raw = std::atan2(s.yd, s.xd);
      pk.theta[j] =
          pk.theta[j - 1] + std::remainder(raw - pk.theta[j - 1], kTwoPi);
    }
    pk.omega[j] = (pk.theta[j] - pk.theta[j - 1]) / dt;
  }
  return pk;
}

std::vector<ControlInput> inverse_inputs(const PlannedKinematics& pk,
                                         double alpha, double dt) {
  if (pk.v.size() < 2)
    throw std::invalid_argument("inverse_inputs: need at least two grid points");
  const double inv_ad = 1.0 / (alpha * dt);
  std::vector<ControlInput> inputs(pk.v.size() - 1);
  for (std::size_t j = 0; j + 1 < pk.v.size(); ++j) {
    inputs[j].v_des = (pk.v[j + 1] - pk.v[j]) * inv_ad + pk.v[j];
    inputs[j].omega_des = (pk.omega[j + 1] - pk.omega[j]) * inv_ad + pk.omega[j];
  }
  return inputs;
}

InverseResult invert_trajectory(const OutputTrajectory& traj,
                                const BotState& state,
                                const DynamicsParams& p) {
  const int n = static_cast<int>(traj.samples.size());
  const PlannedKinematics pk = planned_kinematics(traj, state, n, traj.dt);

  InverseResult out;
  out.inputs = inverse_inputs(pk, p.alpha, traj.dt);
  out.planned_states.resize(traj.samples.size());
  for (std::size_t j = 0; j < traj.samples.size(); ++j) {
    const OutputSample& s = traj.samples[j];
    out.planned_states[j] = {s.x, s.y, pk.theta[j + 1], pk.v[j + 1],
                             pk.omega[j + 1]};
  }
  return out;
}

}  // namespace ompli

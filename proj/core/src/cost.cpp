#include "ompli/cost.hpp"

#include <cmath>
#include <stdexcept>

#include "ompli/errors.hpp"

namespace ompli {

void CostParams::validate() const {
  if (!(w_lane >= 0.0)) throw ConfigError("cost.w_lane: must be >= 0");
  if (!(w_track >= 0.0)) throw ConfigError("cost.w_track: must be >= 0");
  if (!(w_speed >= 0.0)) throw ConfigError("cost.w_speed: must be >= 0");
  if (!(collision_penalty >= 0.0))
    throw ConfigError("cost.collision_penalty: must be >= 0");
  if (input_weight_r != 0.0)
    throw ConfigError("cost.input_weight_r: only 0 is supported");
  if (terminal_weight_phi != 0.0)
    throw ConfigError("cost.terminal_weight_phi: only 0 is supported");
  if (input_deviation_gamma != 0.0)
    throw ConfigError("cost.input_deviation_gamma: only 0 is supported");
}

void CollisionGeom::validate() const {
  if (!(length > 0.0)) throw ConfigError("collision.length: must be > 0");
  if (!(width > 0.0)) throw ConfigError("collision.width: must be > 0");
  if (!(turning_radius > 0.0))
    throw ConfigError("collision.turning_radius: must be > 0");
}

double lane_cost(const BotState& state, const TrackSpec& spec,
                 const CostParams& p) {
  const double r = capsule_coord(state.x, state.y, spec).r;
  const double di = r - spec.inner_lane_radius();
  const double dn = r - spec.outer_lane_radius();
  double c = p.w_lane * (di * di) * (dn * dn);
  if (is_outside_track(state.x, state.y, spec)) c += p.w_track;
  return c;
}

double speed_cost(const BotState& state, const CostParams& p) {
  const double dv = state.v - p.v_target;
  return p.w_speed * dv * dv;
}

bool in_collision_region(double dis_x, double dis_y, double agent_cos,
                         double agent_sin, const CollisionGeom& g) {
  const double proj_f = std::abs(agent_cos * dis_x + agent_sin * dis_y);
  const double proj_l = std::abs(agent_sin * dis_x - agent_cos * dis_y);
  return proj_f < g.half_length_extended() && proj_l < g.half_width();
}

bool in_collision_region(const BotState& state, const Pose2D& agent,
                         const CollisionGeom& g) {
  return in_collision_region(agent.x - state.x, agent.y - state.y,
                             std::cos(agent.theta), std::sin(agent.theta), g);
}

double collision_cost(const BotState& state, const Pose2D& agent,
                      const CollisionGeom& g, const CostParams& p) {
  return in_collision_region(state, agent, g) ? p.collision_penalty : 0.0;
}

double running_cost(const BotState& state, std::span<const Pose2D> agents,
                    const TrackSpec& spec, const CollisionGeom& g,
                    const CostParams& p) {
  double q = lane_cost(state, spec, p) + speed_cost(state, p);
  for (const Pose2D& a : agents) q += collision_cost(state, a, g, p);
  return q;
}

double trajectory_cost(std::span<const BotState> states,
                       const std::vector<std::vector<Pose2D>>& agents_per_step,
                       const TrackSpec& spec, const CollisionGeom& g,
                       const CostParams& p) {
  if (states.size() != agents_per_step.size())
    throw std::invalid_argument(
        "trajectory_cost: states and agent predictions differ in length");
  double total = 0.0;
  for (std::size_t k = 0; k < states.size(); ++k)
    total += running_cost(states[k], agents_per_step[k], spec, g, p);
  return total;
}

}  // namespace ompli

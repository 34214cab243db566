#pragma once

#include <span>
#include <vector>

#include "ompli/dynamics.hpp"
#include "ompli/track.hpp"

namespace ompli {

/// Running-cost weights. The input-energy weight, terminal weight and
/// input-deviation weight are part of the configuration surface but fixed at
/// zero in this build; validate() rejects nonzero values.
struct CostParams {
  double w_lane = 0.001;            // 1/cm^4
  double w_track = 600.0;           // flat off-track penalty
  double w_speed = 0.4;             // s^2/cm^2
  double v_target = 20.0;           // cm/s
  double collision_penalty = 500.0;
  double input_weight_r = 0.0;
  double terminal_weight_phi = 0.0;
  double input_deviation_gamma = 0.0;

  void validate() const;  // throws ConfigError
};

/// Obstacle-aligned extended collision rectangle: half-length
/// 0.5 * length + turning_radius ahead/behind, half-width 0.5 * width.
struct CollisionGeom {
  double length = 63.0;          // cm
  double width = 30.0;           // cm
  double turning_radius = 10.5;  // cm

  double half_length_extended() const {
    return 0.5 * length + turning_radius;
  }
  double half_width() const { return 0.5 * width; }

  void validate() const;  // throws ConfigError
};

/// Lane keeping: product of squared distances to the two lane centerline
/// radii, plus a flat penalty off the track.
double lane_cost(const BotState& state, const TrackSpec& spec,
                 const CostParams& p);

double speed_cost(const BotState& state, const CostParams& p);

/// Collision predicate on the displacement bot -> agent, expressed in the
/// agent's frame via the precomputed heading cosine/sine.
bool in_collision_region(double dis_x, double dis_y, double agent_cos,
                         double agent_sin, const CollisionGeom& g);
bool in_collision_region(const BotState& state, const Pose2D& agent,
                         const CollisionGeom& g);

double collision_cost(const BotState& state, const Pose2D& agent,
                      const CollisionGeom& g, const CostParams& p);

/// q = lane + speed + sum of per-agent collision penalties.
double running_cost(const BotState& state, std::span<const Pose2D> agents,
                    const TrackSpec& spec, const CollisionGeom& g,
                    const CostParams& p);

/// Sum of running costs over a horizon; agents_per_step[k] holds the agent
/// poses coincident in time with states[k]. Throws on length mismatch.
double trajectory_cost(std::span<const BotState> states,
                       const std::vector<std::vector<Pose2D>>& agents_per_step,
                       const TrackSpec& spec, const CollisionGeom& g,
                       const CostParams& p);

}  // namespace ompli

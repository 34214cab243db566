#pragma once

#include <utility>
#include <vector>

#include "ompli/dynamics.hpp"
#include "ompli/rng.hpp"
#include "ompli/track.hpp"

namespace ompli {

/// Cubic polynomial x(t) = a0 + a1 t + a2 t^2 + a3 t^3 on [0, T].
struct Spline1D {
  double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
  double T = 0.0;

  double value(double t) const { return a0 + t * (a1 + t * (a2 + t * a3)); }
  double deriv(double t) const { return a1 + t * (2.0 * a2 + 3.0 * a3 * t); }
};

struct OutputSample {
  double x = 0.0, y = 0.0;    // position
  double xd = 0.0, yd = 0.0;  // velocity
};

/// Planar output rollout: one cubic per axis plus the sampled grid at
/// t = dt, 2dt, ..., n dt (n * dt = T).
struct OutputTrajectory {
  Spline1D sx;
  Spline1D sy;
  double dt = 0.0;
  std::vector<OutputSample> samples;  // index j-1 holds t = j*dt
};

/// Endpoint sampling region, expressed in the road frame anchored at the
/// bot's projection onto the mid-track ring: forward offsets are arc lengths
/// along that ring, lateral offsets are radial (positive outward).
struct RoiParams {
  double forward_min_frac = 0.25;  // of v_max * T; 0 gives the full range
  double forward_max_frac = 1.0;
  int max_rejections = 100;

  void validate() const;  // throws ConfigError
};

struct RegionOfInterest {
  Pose2D anchor;          // road-frame origin and forward direction
  double anchor_s = 0.0;  // arc position of the anchor on the reference ring
  double ref_radius = 0.0;
  double forward_min = 0.0, forward_max = 0.0;   // cm along the ring
  double lateral_min = 0.0, lateral_max = 0.0;   // cm, radial offsets
};

/// Region reachable within horizon_s given the input bounds: forward extent
/// [forward_min_frac, forward_max_frac] * v_max * T, lateral extent the full
/// drivable annulus.
RegionOfInterest build_roi(const BotState& state, double horizon_s,
                           const DynamicsParams& p, const TrackSpec& spec,
                           const RoiParams& roi = {});

/// Uniform draw over the region, mapped through the curved road frame.
/// Resamples endpoints that fall off the annulus; throws ControllerError
/// after max_rejections consecutive rejections or for a degenerate region.
std::pair<double, double> sample_endpoint(const RegionOfInterest& roi,
                                          const TrackSpec& spec,
                                          Splitmix64& rng,
                                          int max_rejections = 100);

/// Road direction at the endpoint.
double endpoint_heading(double x_e, double y_e, const TrackSpec& spec);

/// Unique cubic per axis matching position and velocity at both ends:
/// starts at the current state, ends at (x_e, y_e) heading theta_e with
/// speed chord / T.
OutputTrajectory fit_spline(const BotState& state, double x_e, double y_e,
                            double theta_e, double horizon_s, int n_steps);

}  // namespace ompli

#include "ompli/planner.hpp"

#include <algorithm>
#include <cmath>

#include "ompli/errors.hpp"

namespace ompli {

namespace {

Spline1D fit_axis(double p0, double v0, double pT, double vT, double T) {
  Spline1D s;
  s.T = T;
  s.a0 = p0;
  s.a1 = v0;
  const double d = pT - p0 - v0 * T;
  const double e = vT - v0;
  s.a2 = (3.0 * d - e * T) / (T * T);
  s.a3 = (e * T - 2.0 * d) / (T * T * T);
  return s;
}

/// Place a point at arc position s on the reference ring, then offset it
/// radially by lat (positive outward).
std::pair<double, double> road_frame_point(double s, double lat,
                                           double ref_radius,
                                           const TrackSpec& spec) {
  const Pose2D on_ring = ring_point(ref_radius, s, spec);
  const double hs = spec.half_straight();
  // Nearest point on the capsule axis; the radial direction points away
  // from it.
  const double ay = std::clamp(on_ring.y, -hs, hs);
  const double ux = on_ring.x / ref_radius;
  const double uy = (on_ring.y - ay) / ref_radius;
  return {on_ring.x + lat * ux, on_ring.y + lat * uy};
}

}  // namespace

void RoiParams::validate() const {
  if (!(forward_min_frac >= 0.0))
    throw ConfigError("roi.forward_min_frac: must be >= 0");
  if (!(forward_max_frac > forward_min_frac))
    throw ConfigError("roi.forward_max_frac: must exceed forward_min_frac");
  if (max_rejections < 1)
    throw ConfigError("roi.max_rejections: must be >= 1");
}

RegionOfInterest build_roi(const BotState& state, double horizon_s,
                           const DynamicsParams& p, const TrackSpec& spec,
                           const RoiParams& roi) {
  if (!(horizon_s > 0.0)) throw ConfigError("horizon: must be > 0");

  RegionOfInterest r;
  r.ref_radius = spec.mid_radius();
  r.anchor_s = project_to_ring(state.x, state.y, r.ref_radius, spec).s;
  r.anchor = ring_point(r.ref_radius, r.anchor_s, spec);

  const double reach = p.v_max * horizon_s;
  r.forward_min = roi.forward_min_frac * reach;
  r.forward_max = roi.forward_max_frac * reach;
  r.lateral_min = spec.inner_radius - r.ref_radius;
  r.lateral_max = spec.outer_radius() - r.ref_radius;
  return r;
}

std::pair<double, double> sample_endpoint(const RegionOfInterest& roi,
                                          const TrackSpec& spec,
                                          Splitmix64& rng,
                                          int max_rejections) {
  if (!(roi.forward_max > roi.forward_min) ||
      !(roi.lateral_max > roi.lateral_min))
    throw ControllerError("sample_endpoint: degenerate region of interest");

  for (int attempt = 0; attempt < max_rejections; ++attempt) {
    const double d = uniform(rng, roi.forward_min, roi.forward_max);
    const double lat = uniform(rng, roi.lateral_min, roi.lateral_max);
    const auto [x, y] =
        road_frame_point(roi.anchor_s + d, lat, roi.ref_radius, spec);
    if (!is_outside_track(x, y, spec)) return {x, y};
  }
  throw ControllerError("sample_endpoint: rejection limit exceeded");
}

double endpoint_heading(double x_e, double y_e, const TrackSpec& spec) {
  return road_tangent(x_e, y_e, spec);
}

OutputTrajectory fit_spline(const BotState& state, double x_e, double y_e,
                            double theta_e, double horizon_s, int n_steps) {
  if (!(horizon_s > 0.0)) throw ConfigError("horizon: must be > 0");
  if (n_steps < 1) throw ConfigError("horizon steps: must be >= 1");

  const double dx = x_e - state.x;
  const double dy = y_e - state.y;
  const double v_e = std::sqrt(dx * dx + dy * dy) / horizon_s;

  OutputTrajectory traj;
  traj.sx = fit_axis(state.x, state.v * std::cos(state.theta), x_e,
                     v_e * std::cos(theta_e), horizon_s);
  traj.sy = fit_axis(state.y, state.v * std::sin(state.theta), y_e,
                     v_e * std::sin(theta_e), horizon_s);
  traj.dt = horizon_s / n_steps;
  traj.samples.resize(static_cast<std::size_t>(n_steps));
  for (int j = 1; j <= n_steps; ++j) {
    const double t = j * traj.dt;
    auto& s = traj.samples[static_cast<std::size_t>(j - 1)];
    s.x = traj.sx.value(t);
    s.y = traj.sy.value(t);
    s.xd = traj.sx.deriv(t);
    s.yd = traj.sy.deriv(t);
  }
  return traj;
}

}  // namespace ompli

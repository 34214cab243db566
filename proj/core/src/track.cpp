#include "ompli/track.hpp"

#include <cmath>
#include <numbers>

#include "ompli/errors.hpp"

namespace ompli {

namespace {
constexpr double kPi = std::numbers::pi;

double sign(double v) { return v < 0.0 ? -1.0 : 1.0; }
}  // namespace

void TrackSpec::validate() const {
  if (!(lane_width > 0.0)) throw ConfigError("track.lane_width: must be > 0");
  if (!(straight_length > 0.0))
    throw ConfigError("track.straight_length: must be > 0");
  if (!(inner_radius > 0.0))
    throw ConfigError("track.inner_radius: must be > 0");
}

double lane_radius(LaneId lane, const TrackSpec& spec) {
  return lane == LaneId::Inner ? spec.inner_lane_radius()
                               : spec.outer_lane_radius();
}

CapsuleCoord capsule_coord(double x, double y, const TrackSpec& spec) {
  const double hs = spec.half_straight();
  CapsuleCoord c;
  c.z = std::abs(y) < hs ? 0.0 : y - hs * sign(y);
  c.r = std::sqrt(x * x + c.z * c.z);
  c.on_straight = c.z == 0.0;
  return c;
}

bool is_outside_track(double x, double y, const TrackSpec& spec) {
  const double r = capsule_coord(x, y, spec).r;
  return r < spec.inner_radius || r > spec.outer_radius();
}

double ring_perimeter(double radius, const TrackSpec& spec) {
  return 2.0 * spec.straight_length + 2.0 * kPi * radius;
}

double lane_perimeter(LaneId lane, const TrackSpec& spec) {
  return ring_perimeter(lane_radius(lane, spec), spec);
}

Pose2D ring_point(double radius, double s, const TrackSpec& spec) {
  const double hs = spec.half_straight();
  const double sl = spec.straight_length;
  const double arc = kPi * radius;
  const double perimeter = ring_perimeter(radius, spec);

  s = std::fmod(s, perimeter);
  if (s < 0.0) s += perimeter;

  Pose2D p;
  if (s < hs) {                       // right straight, upper half
    p = {radius, s, 0.0};
    p.theta = std::atan2(1.0, 0.0);
  } else if (s < hs + arc) {          // top semicircle
    const double phi = (s - hs) / radius;
    p = {radius * std::cos(phi), hs + radius * std::sin(phi), 0.0};
    p.theta = std::atan2(std::cos(phi), -std::sin(phi));
  } else if (s < hs + arc + sl) {     // left straight
    const double d = s - (hs + arc);
    p = {-radius, hs - d, 0.0};
    p.theta = std::atan2(-1.0, 0.0);
  } else if (s < hs + 2.0 * arc + sl) {  // bottom semicircle
    const double psi = kPi + (s - (hs + arc + sl)) / radius;
    p = {radius * std::cos(psi), -hs + radius * std::sin(psi), 0.0};
    p.theta = std::atan2(std::cos(psi), -std::sin(psi));
  } else {                            // right straight, lower half
    const double d = s - (hs + 2.0 * arc + sl);
    p = {radius, -hs + d, 0.0};
    p.theta = std::atan2(1.0, 0.0);
  }
  return p;
}

Pose2D lane_point(LaneId lane, double s, const TrackSpec& spec) {
  return ring_point(lane_radius(lane, spec), s, spec);
}

RingProjection project_to_ring(double x, double y, double radius,
                               const TrackSpec& spec) {
  const double hs = spec.half_straight();
  const double sl = spec.straight_length;
  const double arc = kPi * radius;
  const double perimeter = ring_perimeter(radius, spec);

  RingProjection out;
  if (std::abs(y) <= hs) {
    if (x >= 0.0) {
      out.s = y >= 0.0 ? y : perimeter + y;
    } else {
      out.s = hs + arc + (hs - y);
    }
  } else if (y > hs) {
    const double phi = std::atan2(y - hs, x);  // in (0, pi)
    out.s = hs + phi * radius;
  } else {
    const double xi = std::atan2(y + hs, x);   // in (-pi, 0)
    out.s = hs + arc + sl + (xi + kPi) * radius;
  }

  const CapsuleCoord c = capsule_coord(x, y, spec);
  out.inside_annulus =
      c.r >= spec.inner_radius && c.r <= spec.outer_radius();
  return out;
}

double progress(double x, double y, LaneId lane, const TrackSpec& spec) {
  return project_to_ring(x, y, lane_radius(lane, spec), spec).s;
}

double road_tangent(double x, double y, const TrackSpec& spec) {
  const double hs = spec.half_straight();
  if (std::abs(y) <= hs) {
    return x >= 0.0 ? std::atan2(1.0, 0.0) : std::atan2(-1.0, 0.0);
  }
  if (y > hs) {
    const double phi = std::atan2(y - hs, x);
    return std::atan2(std::cos(phi), -std::sin(phi));
  }
  const double psi = std::atan2(y + hs, x);
  return std::atan2(std::cos(psi), -std::sin(psi));
}

double progress_delta(double from_s, double to_s, double perimeter) {
  return std::remainder(to_s - from_s, perimeter);
}

}  // namespace ompli

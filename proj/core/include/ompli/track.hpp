#pragma once

#include <cstdint>

namespace ompli {

/// Stadium track: two straights along the y-axis joined by two semicircles.
/// Two concentric lanes fill the annulus between inner_radius and
/// inner_radius + 2 * lane_width. All lengths in cm.
struct TrackSpec {
  double lane_width = 30.0;
  double straight_length = 150.0;
  double inner_radius = 40.0;

  double half_straight() const { return 0.5 * straight_length; }
  double inner_lane_radius() const { return inner_radius + 0.5 * lane_width; }
  double outer_lane_radius() const { return inner_radius + 1.5 * lane_width; }
  double outer_radius() const { return inner_radius + 2.0 * lane_width; }
  /// Boundary between the two lanes; used as the reference ring for the
  /// road-frame sampling region.
  double mid_radius() const { return inner_radius + lane_width; }

  void validate() const;  // throws ConfigError
};

enum class LaneId : std::uint8_t { Inner, Outer };

double lane_radius(LaneId lane, const TrackSpec& spec);

/// Capsule coordinate: r is the distance from the central segment, z the
/// axial excess beyond the straight section (z == 0 iff on the straight).
struct CapsuleCoord {
  double r = 0.0;
  double z = 0.0;
  bool on_straight = false;
};

CapsuleCoord capsule_coord(double x, double y, const TrackSpec& spec);

/// True when (x, y) lies off the drivable annulus (inside the hole or past
/// the outer boundary).
bool is_outside_track(double x, double y, const TrackSpec& spec);

struct Pose2D {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
};

/// Perimeter of the stadium ring at the given radius.
double ring_perimeter(double radius, const TrackSpec& spec);
double lane_perimeter(LaneId lane, const TrackSpec& spec);

/// Point on the stadium ring of the given radius at arc length s from the
/// reference point (x = +radius, y = 0), travelling counter-clockwise.
/// s is normalized modulo the perimeter; theta is the travel tangent.
Pose2D ring_point(double radius, double s, const TrackSpec& spec);
Pose2D lane_point(LaneId lane, double s, const TrackSpec& spec);

struct RingProjection {
  double s = 0.0;            // arc length of the nearest ring point
  bool inside_annulus = false;
};

/// Arc-length coordinate of the radial projection of (x, y) onto the ring.
/// Total: points outside the annulus still project (flagged).
RingProjection project_to_ring(double x, double y, double radius,
                               const TrackSpec& spec);

/// Arc-length coordinate on the given lane centerline, in [0, perimeter).
double progress(double x, double y, LaneId lane, const TrackSpec& spec);

/// Counter-clockwise travel direction of the road at (x, y). Depends only on
/// the angular position, not on the radius.
double road_tangent(double x, double y, const TrackSpec& spec);

/// Smallest-magnitude wrapped difference to - from on a ring of the given
/// perimeter; used to accumulate unwrapped progress across laps.
double progress_delta(double from_s, double to_s, double perimeter);

}  // namespace ompli

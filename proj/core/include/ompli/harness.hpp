#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ompli/controller.hpp"
#include "ompli/dynamics.hpp"
#include "ompli/track.hpp"

namespace ompli {

enum class ControllerKind : std::uint8_t { Mppi, Ompli };

enum class FailureReason : std::uint8_t {
  WrongDirection,  // net clockwise motion beyond the backtrack tolerance
  OutOfTrack,
  Collision,
  NotAhead,  // finished behind (or inside) an obstacle's clear-ahead margin
  Timeout,   // episode aborted early (controller error)
};
constexpr int kFailureReasonCount = 5;
const char* to_string(FailureReason reason);

/// Obstacle start: either an arc position on its lane or a free position
/// that is projected onto the lane centerline.
struct ObstacleSpec {
  LaneId lane = LaneId::Outer;
  std::optional<double> arc_position;             // cm along the lane
  std::optional<std::pair<double, double>> position;  // (x, y) cm
  double speed = 0.0;                             // cm/s

  ObstacleState resolve(const TrackSpec& spec) const;
};

/// Episode stop rule: the lead obstacle travelling a given arc distance,
/// a wall of simulated seconds, or whichever comes first.
struct TerminationRule {
  std::optional<double> obstacle_travel;  // cm, applies to obstacles[0]
  std::optional<double> max_duration_s;
};

struct ScenarioConfig {
  ControllerKind controller = ControllerKind::Ompli;
  ControlSetup setup;
  BotState initial_state;
  std::vector<ObstacleSpec> obstacles;
  TerminationRule termination;
  std::optional<double> success_deadline_s;  // defaults to the termination
  std::uint64_t seed = 0;
  bool record_trace = false;
  bool stop_on_failure = true;

  void validate() const;  // throws ConfigError
};

struct TraceRecord {
  double t = 0.0;
  BotState state;       // pre-step state at time t
  ControlInput applied;
  double step_cost = 0.0;  // running cost against the actual obstacle poses
  std::vector<Pose2D> obstacles;
};

struct EpisodeResult {
  bool success = false;
  std::optional<FailureReason> failure;
  std::string note;  // controller-error text, when any
  std::vector<TraceRecord> trace;
  double duration_s = 0.0;
  double final_bot_progress = 0.0;  // unwrapped, mid-track ring
  std::vector<double> final_gap;    // unwrapped bot-minus-obstacle arc gap
};

/// Closed loop at the plant period: decide, record, step, advance obstacles.
/// Success requires counter-clockwise motion throughout, never leaving the
/// track or entering a collision region, and finishing clear ahead of every
/// obstacle.
EpisodeResult run_episode(const ScenarioConfig& cfg);

/// Trace-level reruns of the per-step checks (the episode loop applies the
/// same logic incrementally).
bool check_direction(std::span<const TraceRecord> trace, const TrackSpec& spec,
                     double backtrack_tolerance = 5.0);
bool check_collision_free(std::span<const TraceRecord> trace,
                          const TrackSpec& spec, const CollisionGeom& geom);
/// Clear-ahead test on the final unwrapped arc gap (bot minus obstacle).
bool check_ahead(double final_gap, const CollisionGeom& geom);

struct SuccessRateReport {
  int trials = 0;
  int successes = 0;
  double rate_percent = 0.0;
  std::array<int, kFailureReasonCount> failure_counts{};
  double total_wall_s = 0.0;
  double mean_episode_wall_s = 0.0;
};

/// Runs trials episodes with seeds base_seed + i. Episodes are independent;
/// threads > 1 splits them over workers without changing any result.
SuccessRateReport monte_carlo(const ScenarioConfig& cfg, int trials,
                              std::uint64_t base_seed, int threads = 1);

/// Built-in experiment scenarios: "1" (output-sampled, 2 s horizon),
/// "2" (input-sampled, 2 s), "3" (input-sampled, 8 s), "4" (input-sampled,
/// 8 s, slow nominal input), "multi" (two obstacles, output-sampled
/// defaults). Throws ConfigError for unknown ids.
ScenarioConfig case_preset(const std::string& id);

/// Distance the lead obstacle travels from its start to the far junction of
/// the first semicircle on its way; the default episode length.
double arc_travel_to_far_junction(const ObstacleState& o,
                                  const TrackSpec& spec);

/// Occupancy footprint of the sampled rollouts on a 1 cm grid.
struct OccupancyGrid {
  double cell_size = 1.0;  // cm
  int x0 = 0, y0 = 0;      // cell coordinates of the lower-left corner
  int nx = 0, ny = 0;
  std::vector<std::uint8_t> cells;  // row-major, ny rows of nx

  int occupied() const;
  double area() const { return occupied() * cell_size * cell_size; }
};

/// Rasterize every state visited by `rollouts` input-space samples around
/// the nominal input, at the given control rate over the same horizon.
OccupancyGrid exploration_grid(const BotState& state, ControlSetup setup,
                               double rate_hz, double horizon_s,
                               std::uint64_t seed);

/// Explored area (cm^2) per control rate, all other settings shared.
std::vector<double> exploration_area(const BotState& state,
                                     const ControlSetup& setup,
                                     std::span<const double> rates_hz,
                                     double horizon_s, std::uint64_t seed);

}  // namespace ompli

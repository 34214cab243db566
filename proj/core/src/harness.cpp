#include "ompli/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>
#include <unordered_set>

#include "ompli/cost.hpp"
#include "ompli/errors.hpp"

namespace ompli {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTimeEps = 1e-9;

/// Unwrapped arc-length accumulator on one ring.
class ProgressTracker {
 public:
  ProgressTracker(double s0, double perimeter)
      : prev_(s0), perimeter_(perimeter) {}

  double advance(double s_now) {
    const double d = progress_delta(prev_, s_now, perimeter_);
    prev_ = s_now;
    cumulative_ += d;
    return d;
  }

  double cumulative() const { return cumulative_; }

 private:
  double prev_;
  double perimeter_;
  double cumulative_ = 0.0;
};

/// Counter-clockwise check with a bounded backtrack allowance.
class DirectionChecker {
 public:
  DirectionChecker(double s0, double perimeter, double tolerance)
      : tracker_(s0, perimeter), tolerance_(tolerance) {}

  bool feed(double s_now) {
    tracker_.advance(s_now);
    high_water_ = std::max(high_water_, tracker_.cumulative());
    return tracker_.cumulative() >= high_water_ - tolerance_;
  }

  double cumulative() const { return tracker_.cumulative(); }

 private:
  ProgressTracker tracker_;
  double tolerance_;
  double high_water_ = 0.0;
};

std::vector<Pose2D> poses_of(std::span<const ObstacleState> obstacles,
                             const TrackSpec& spec) {
  std::vector<Pose2D> poses;
  poses.reserve(obstacles.size());
  for (const auto& o : obstacles) poses.push_back(obstacle_pose(o, spec));
  return poses;
}

}  // namespace

const char* to_string(FailureReason reason) {
  switch (reason) {
    case FailureReason::WrongDirection: return "wrong_direction";
    case FailureReason::OutOfTrack: return "out_of_track";
    case FailureReason::Collision: return "collision";
    case FailureReason::NotAhead: return "not_ahead";
    case FailureReason::Timeout: return "timeout";
  }
  return "unknown";
}

ObstacleState ObstacleSpec::resolve(const TrackSpec& spec) const {
  ObstacleState o;
  o.lane = lane;
  o.speed = speed;
  const double perimeter = lane_perimeter(lane, spec);
  if (arc_position) {
    o.s = std::fmod(*arc_position, perimeter);
    if (o.s < 0.0) o.s += perimeter;
  } else if (position) {
    o.s = progress(position->first, position->second, lane, spec);
  } else {
    throw ConfigError("obstacle: needs arc_position or position");
  }
  return o;
}

void ScenarioConfig::validate() const {
  setup.validate();
  if (!std::isfinite(initial_state.x) || !std::isfinite(initial_state.y) ||
      !std::isfinite(initial_state.theta) || !std::isfinite(initial_state.v) ||
      !std::isfinite(initial_state.omega))
    throw ConfigError("initial_state: must be finite");
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    const auto& o = obstacles[i];
    const std::string where = "obstacles[" + std::to_string(i) + "]";
    if (o.arc_position.has_value() == o.position.has_value())
      throw ConfigError(where + ": set exactly one of arc_position, position");
    if (!(o.speed >= 0.0)) throw ConfigError(where + ".speed: must be >= 0");
  }
  if (!termination.obstacle_travel && !termination.max_duration_s)
    throw ConfigError("termination: needs obstacle_travel or max_duration_s");
  if (termination.obstacle_travel) {
    if (obstacles.empty())
      throw ConfigError("termination.obstacle_travel: needs an obstacle");
    if (!(obstacles.front().speed > 0.0))
      throw ConfigError(
          "termination.obstacle_travel: obstacles[0].speed must be > 0");
    if (!(*termination.obstacle_travel >= 0.0))
      throw ConfigError("termination.obstacle_travel: must be >= 0");
  }
  if (termination.max_duration_s && !(*termination.max_duration_s > 0.0))
    throw ConfigError("termination.max_duration_s: must be > 0");
  if (success_deadline_s && !(*success_deadline_s > 0.0))
    throw ConfigError("success_deadline_s: must be > 0");
}

bool check_ahead(double final_gap, const CollisionGeom& geom) {
  return final_gap > geom.half_length_extended();
}

EpisodeResult run_episode(const ScenarioConfig& cfg) {
  cfg.validate();

  const TrackSpec& track = cfg.setup.track;
  const DynamicsParams& dyn = cfg.setup.dynamics;
  const double dt = dyn.dt;
  const int N = cfg.setup.mppi.horizon_steps;

  std::vector<ObstacleState> obstacles;
  obstacles.reserve(cfg.obstacles.size());
  for (const auto& spec : cfg.obstacles) obstacles.push_back(spec.resolve(track));

  // Direction is tracked on the mid-track ring, lane changes included.
  const double mid_r = track.mid_radius();
  DirectionChecker direction(
      project_to_ring(cfg.initial_state.x, cfg.initial_state.y, mid_r, track).s,
      ring_perimeter(mid_r, track), 5.0);

  // Per-obstacle unwrapped arc gap (bot minus obstacle, on the obstacle's
  // lane), seeded with the smallest-magnitude initial offset.
  struct GapTracker {
    ProgressTracker bot;
    double gap;
    double perimeter;
  };
  std::vector<GapTracker> gaps;
  gaps.reserve(obstacles.size());
  for (const auto& o : obstacles) {
    const double perimeter = lane_perimeter(o.lane, track);
    const double bot_s =
        progress(cfg.initial_state.x, cfg.initial_state.y, o.lane, track);
    gaps.push_back({ProgressTracker(bot_s, perimeter),
                    progress_delta(o.s, bot_s, perimeter), perimeter});
  }

  ControlSequence mean(static_cast<std::size_t>(N), cfg.setup.mppi.initial_mean);

  EpisodeResult result;
  BotState state = cfg.initial_state;
  double obstacle_travel = 0.0;
  std::optional<FailureReason> failure;
  std::string note;

  double effective_max_t = std::numeric_limits<double>::infinity();
  if (cfg.termination.max_duration_s)
    effective_max_t = *cfg.termination.max_duration_s;
  if (cfg.success_deadline_s)
    effective_max_t = std::min(effective_max_t, *cfg.success_deadline_s);

  std::uint64_t k = 0;
  for (;; ++k) {
    const double t = static_cast<double>(k) * dt;

    const bool done =
        (cfg.termination.obstacle_travel &&
         obstacle_travel >= *cfg.termination.obstacle_travel - kTimeEps) ||
        t >= effective_max_t - kTimeEps;

    // Instantaneous criteria on the state at time t (final instant included).
    if (!failure) {
      if (!direction.feed(project_to_ring(state.x, state.y, mid_r, track).s)) {
        failure = FailureReason::WrongDirection;
      } else if (is_outside_track(state.x, state.y, track)) {
        failure = FailureReason::OutOfTrack;
      } else {
        for (const auto& o : obstacles) {
          if (in_collision_region(state, obstacle_pose(o, track),
                                  cfg.setup.collision)) {
            failure = FailureReason::Collision;
            break;
          }
        }
      }
    } else {
      direction.feed(project_to_ring(state.x, state.y, mid_r, track).s);
    }

    if (done || (failure && cfg.stop_on_failure)) {
      result.duration_s = t;
      break;
    }

    ControlDecision decision;
    try {
      if (cfg.controller == ControllerKind::Mppi) {
        decision = mppi_step(state, mean, obstacles, cfg.setup, cfg.seed, k);
        mean = warm_start(std::move(decision.optimized),
                          cfg.setup.mppi.initial_mean);
      } else {
        decision = ompli_step(state, obstacles, cfg.setup, cfg.seed, k);
      }
    } catch (const ControllerError& e) {
      failure = FailureReason::Timeout;
      note = e.what();
      result.duration_s = t;
      break;
    }

    if (cfg.record_trace) {
      TraceRecord rec;
      rec.t = t;
      rec.state = state;
      rec.applied = decision.applied;
      rec.obstacles = poses_of(obstacles, track);
      rec.step_cost = running_cost(state, rec.obstacles, track,
                                   cfg.setup.collision, cfg.setup.cost);
      result.trace.push_back(std::move(rec));
    }

    state = step(state, decision.applied, dyn);
    for (auto& o : obstacles) o = obstacle_step(o, dt, track);
    if (!obstacles.empty()) obstacle_travel += obstacles.front().speed * dt;

    for (std::size_t i = 0; i < gaps.size(); ++i) {
      const double bot_s = progress(state.x, state.y, obstacles[i].lane, track);
      gaps[i].gap +=
          gaps[i].bot.advance(bot_s) - obstacles[i].speed * dt;
    }
  }

  result.final_bot_progress = direction.cumulative();
  result.final_gap.reserve(gaps.size());
  for (const auto& g : gaps) result.final_gap.push_back(g.gap);

  if (!failure) {
    for (const auto& g : gaps) {
      if (!check_ahead(g.gap, cfg.setup.collision)) {
        failure = FailureReason::NotAhead;
        break;
      }
    }
  }

  result.success = !failure.has_value();
  result.failure = failure;
  result.note = std::move(note);
  return result;
}

bool check_direction(std::span<const TraceRecord> trace, const TrackSpec& spec,
                     double backtrack_tolerance) {
  if (trace.empty()) return true;
  const double mid_r = spec.mid_radius();
  DirectionChecker checker(
      project_to_ring(trace.front().state.x, trace.front().state.y, mid_r, spec)
          .s,
      ring_perimeter(mid_r, spec), backtrack_tolerance);
  for (const auto& rec : trace)
    if (!checker.feed(project_to_ring(rec.state.x, rec.state.y, mid_r, spec).s))
      return false;
  return true;
}

bool check_collision_free(std::span<const TraceRecord> trace,
                          const TrackSpec& spec, const CollisionGeom& geom) {
  for (const auto& rec : trace) {
    if (is_outside_track(rec.state.x, rec.state.y, spec)) return false;
    for (const auto& pose : rec.obstacles)
      if (in_collision_region(rec.state, pose, geom)) return false;
  }
  return true;
}

SuccessRateReport monte_carlo(const ScenarioConfig& cfg, int trials,
                              std::uint64_t base_seed, int threads) {
  if (trials < 1) throw ConfigError("trials: must be >= 1");
  cfg.validate();

  struct Outcome {
    bool success = false;
    std::optional<FailureReason> failure;
    double wall_s = 0.0;
  };
  std::vector<Outcome> outcomes(static_cast<std::size_t>(trials));

  const auto run_range = [&](int worker, int stride) {
    for (int i = worker; i < trials; i += stride) {
      ScenarioConfig episode = cfg;
      episode.seed = base_seed + static_cast<std::uint64_t>(i);
      episode.record_trace = false;
      const auto t0 = std::chrono::steady_clock::now();
      const EpisodeResult r = run_episode(episode);
      const auto t1 = std::chrono::steady_clock::now();
      outcomes[static_cast<std::size_t>(i)] = {
          r.success, r.failure,
          std::chrono::duration<double>(t1 - t0).count()};
    }
  };

  const auto t0 = std::chrono::steady_clock::now();
  const int workers = std::clamp(threads, 1, trials);
  if (workers <= 1) {
    run_range(0, 1);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back(run_range, w, workers);
    for (auto& th : pool) th.join();
  }
  const auto t1 = std::chrono::steady_clock::now();

  SuccessRateReport report;
  report.trials = trials;
  double wall_sum = 0.0;
  for (const auto& o : outcomes) {
    if (o.success) ++report.successes;
    else if (o.failure)
      ++report.failure_counts[static_cast<std::size_t>(*o.failure)];
    wall_sum += o.wall_s;
  }
  report.rate_percent = 100.0 * report.successes / trials;
  report.total_wall_s = std::chrono::duration<double>(t1 - t0).count();
  report.mean_episode_wall_s = wall_sum / trials;
  return report;
}

double arc_travel_to_far_junction(const ObstacleState& o,
                                  const TrackSpec& spec) {
  const double radius = lane_radius(o.lane, spec);
  const double hs = spec.half_straight();
  const double sl = spec.straight_length;
  const double arc = kPi * radius;
  const double perimeter = ring_perimeter(radius, spec);

  const double top_arc_end = hs + arc;
  const double left_straight_end = hs + arc + sl;
  const double bottom_arc_end = hs + 2.0 * arc + sl;

  const double s = o.s;
  if (s < hs) return top_arc_end - s;                      // upper right straight
  if (s < top_arc_end) return top_arc_end - s;             // on the top arc
  if (s < left_straight_end) return bottom_arc_end - s;    // left straight
  if (s < bottom_arc_end) return bottom_arc_end - s;       // on the bottom arc
  return (perimeter - s) + top_arc_end;                    // lower right straight
}

ScenarioConfig case_preset(const std::string& id) {
  ScenarioConfig cfg;
  cfg.setup = ControlSetup{};
  cfg.seed = 0;

  if (id == "1" || id == "2" || id == "3" || id == "4") {
    cfg.initial_state = {85.0, -10.0, kPi / 2.0, 15.0, 0.0};
    cfg.obstacles = {
        ObstacleSpec{LaneId::Outer, std::nullopt, {{85.0, 50.0}}, 10.0}};
    cfg.termination.obstacle_travel = arc_travel_to_far_junction(
        cfg.obstacles.front().resolve(cfg.setup.track), cfg.setup.track);

    if (id == "1") {
      cfg.controller = ControllerKind::Ompli;
      cfg.setup.mppi.rollouts = 50;
      cfg.setup.mppi.horizon_steps = 50;  // 2.0 s at the default period
    } else if (id == "2") {
      cfg.controller = ControllerKind::Mppi;
      cfg.setup.mppi.rollouts = 50;
      cfg.setup.mppi.horizon_steps = 50;
    } else if (id == "3") {
      cfg.controller = ControllerKind::Mppi;
      cfg.setup.mppi.rollouts = 1000;
      cfg.setup.mppi.horizon_steps = 200;  // 8.0 s
    } else {  // "4"
      cfg.controller = ControllerKind::Mppi;
      cfg.setup.mppi.rollouts = 2000;
      cfg.setup.mppi.horizon_steps = 200;
      cfg.setup.mppi.initial_mean = {10.0, 0.0};
    }
    return cfg;
  }

  if (id == "multi") {
    cfg.controller = ControllerKind::Ompli;
    cfg.setup.mppi.rollouts = 50;
    cfg.setup.mppi.horizon_steps = 50;
    cfg.initial_state = {-55.0, -10.0, -kPi / 2.0, 15.0, 0.0};
    cfg.obstacles = {
        ObstacleSpec{LaneId::Inner, std::nullopt, {{23.0, -156.0}}, 10.0},
        ObstacleSpec{LaneId::Outer, std::nullopt, {{-55.0, -75.0}}, 12.0}};
    // Long enough for a double overtake at near-target speed.
    cfg.termination.max_duration_s = 45.0;
    return cfg;
  }

  throw ConfigError("unknown case preset: " + id);
}

int OccupancyGrid::occupied() const {
  int n = 0;
  for (std::uint8_t c : cells) n += c != 0;
  return n;
}

OccupancyGrid exploration_grid(const BotState& state, ControlSetup setup,
                               double rate_hz, double horizon_s,
                               std::uint64_t seed) {
  if (!(rate_hz > 0.0)) throw ConfigError("rate: must be > 0");
  if (!(horizon_s > 0.0)) throw ConfigError("horizon: must be > 0");

  setup.dynamics.dt = 1.0 / rate_hz;
  const int n_steps =
      static_cast<int>(std::llround(horizon_s * rate_hz));
  if (n_steps < 1) throw ConfigError("rate: fewer than one step per horizon");
  setup.mppi.horizon_steps = n_steps;

  const ControlSequence mean(static_cast<std::size_t>(n_steps),
                             setup.mppi.initial_mean);

  std::unordered_set<std::int64_t> visited;
  int min_cx = 0, max_cx = 0, min_cy = 0, max_cy = 0;
  bool first = true;
  const auto mark = [&](double x, double y) {
    const int cx = static_cast<int>(std::floor(x));
    const int cy = static_cast<int>(std::floor(y));
    if (first) {
      min_cx = max_cx = cx;
      min_cy = max_cy = cy;
      first = false;
    } else {
      min_cx = std::min(min_cx, cx);
      max_cx = std::max(max_cx, cx);
      min_cy = std::min(min_cy, cy);
      max_cy = std::max(max_cy, cy);
    }
    visited.insert((static_cast<std::int64_t>(cx) << 32) ^
                   static_cast<std::uint32_t>(cy));
  };

  mark(state.x, state.y);
  for (int m = 0; m < setup.mppi.rollouts; ++m) {
    const Rollout r = generate_mppi_rollout(state, mean, setup, seed, 0,
                                            static_cast<std::uint64_t>(m));
    for (const auto& [x, y] : r.outputs) mark(x, y);
  }

  OccupancyGrid grid;
  grid.x0 = min_cx;
  grid.y0 = min_cy;
  grid.nx = max_cx - min_cx + 1;
  grid.ny = max_cy - min_cy + 1;
  grid.cells.assign(static_cast<std::size_t>(grid.nx) * grid.ny, 0);
  for (std::int64_t key : visited) {
    const int cx = static_cast<int>(key >> 32);
    const int cy = static_cast<int>(static_cast<std::uint32_t>(key & 0xffffffff));
    grid.cells[static_cast<std::size_t>(cy - grid.y0) * grid.nx +
               (cx - grid.x0)] = 1;
  }
  return grid;
}

std::vector<double> exploration_area(const BotState& state,
                                     const ControlSetup& setup,
                                     std::span<const double> rates_hz,
                                     double horizon_s, std::uint64_t seed) {
  std::vector<double> areas;
  areas.reserve(rates_hz.size());
  for (double rate : rates_hz)
    areas.push_back(exploration_grid(state, setup, rate, horizon_s, seed).area());
  return areas;
}

}  // namespace ompli

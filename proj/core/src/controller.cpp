#include "ompli/controller.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ompli/errors.hpp"
#include "ompli/inverse.hpp"
#include "ompli/rng.hpp"

namespace ompli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Predicted agent pose with its heading trig, laid out per horizon step:
/// frames[k * count + a] is agent a at grid point k+1.
struct AgentFrames {
  std::vector<double> x, y, cos_h, sin_h;
  int count = 0;

  static AgentFrames build(std::span<const ObstacleState> obstacles,
                           int horizon_steps, double dt,
                           const TrackSpec& spec) {
    AgentFrames f;
    f.count = static_cast<int>(obstacles.size());
    const std::size_t total =
        static_cast<std::size_t>(horizon_steps) * obstacles.size();
    f.x.resize(total);
    f.y.resize(total);
    f.cos_h.resize(total);
    f.sin_h.resize(total);

    std::vector<ObstacleState> cur(obstacles.begin(), obstacles.end());
    std::size_t idx = 0;
    for (int k = 1; k <= horizon_steps; ++k) {
      for (auto& o : cur) {
        o = obstacle_step(o, dt, spec);
        const Pose2D pose = obstacle_pose(o, spec);
        f.x[idx] = pose.x;
        f.y[idx] = pose.y;
        f.cos_h[idx] = std::cos(pose.theta);
        f.sin_h[idx] = std::sin(pose.theta);
        ++idx;
      }
    }
    return f;
  }
};

/// Running cost of one post-step state against the predicted agents at the
/// same grid point. Mirrors running_cost() with precomputed heading trig.
double step_cost(const BotState& s, const AgentFrames& frames, int k,
                 const ControlSetup& setup) {
  double q = lane_cost(s, setup.track, setup.cost) +
             speed_cost(s, setup.cost);
  const std::size_t base = static_cast<std::size_t>(k) * frames.count;
  for (int a = 0; a < frames.count; ++a) {
    const std::size_t i = base + a;
    if (in_collision_region(frames.x[i] - s.x, frames.y[i] - s.y,
                            frames.cos_h[i], frames.sin_h[i],
                            setup.collision))
      q += setup.cost.collision_penalty;
  }
  return q;
}

DecisionDiagnostics summarize(std::span<const double> costs,
                              std::span<const double> weights) {
  DecisionDiagnostics d;
  d.min_cost = kInf;
  double sum = 0.0;
  int finite = 0;
  for (double c : costs) {
    if (std::isfinite(c)) {
      d.min_cost = std::min(d.min_cost, c);
      sum += c;
      ++finite;
    }
  }
  d.rejected = static_cast<int>(costs.size()) - finite;
  d.mean_cost = finite > 0 ? sum / finite : kInf;
  double w2 = 0.0;
  for (double w : weights) w2 += w * w;
  d.effective_samples = w2 > 0.0 ? 1.0 / w2 : 0.0;
  return d;
}

}  // namespace

void MppiParams::validate() const {
  if (rollouts < 1) throw ConfigError("mppi.rollouts: must be >= 1");
  if (horizon_steps < 1) throw ConfigError("mppi.horizon_steps: must be >= 1");
  if (!(lambda > 0.0)) throw ConfigError("mppi.lambda: must be > 0");
  if (!(noise_var_v > 0.0))
    throw ConfigError("mppi.noise_variance.v_des: must be > 0");
  if (!(noise_var_omega > 0.0))
    throw ConfigError("mppi.noise_variance.omega_des: must be > 0");
  if (!std::isfinite(initial_mean.v_des) ||
      !std::isfinite(initial_mean.omega_des))
    throw ConfigError("mppi.initial_mean: must be finite");
}

void ControlSetup::validate() const {
  track.validate();
  dynamics.validate();
  cost.validate();
  collision.validate();
  mppi.validate();
  roi.validate();
}

std::vector<double> compute_weights(std::span<const double> costs,
                                    double lambda) {
  if (costs.empty()) throw ControllerError("compute_weights: no rollouts");
  if (!(lambda > 0.0)) throw ConfigError("mppi.lambda: must be > 0");

  double beta = kInf;
  for (double c : costs)
    if (std::isfinite(c)) beta = std::min(beta, c);
  if (!std::isfinite(beta))
    throw ControllerError("compute_weights: every rollout cost is non-finite");

  std::vector<double> w(costs.size(), 0.0);
  double eta = 0.0;
  for (std::size_t m = 0; m < costs.size(); ++m) {
    if (std::isfinite(costs[m])) {
      w[m] = std::exp(-(costs[m] - beta) / lambda);
      eta += w[m];
    }
  }
  for (double& wm : w) wm /= eta;
  return w;
}

ControlSequence warm_start(ControlSequence prev, ControlInput initial_mean) {
  if (prev.empty()) return prev;
  std::rotate(prev.begin(), prev.begin() + 1, prev.end());
  prev.back() = initial_mean;
  return prev;
}

ControlDecision mppi_step(const BotState& state,
                          std::span<const ControlInput> mean_seq,
                          std::span<const ObstacleState> obstacles,
                          const ControlSetup& setup, std::uint64_t seed,
                          std::uint64_t step_index) {
  const int M = setup.mppi.rollouts;
  const int N = setup.mppi.horizon_steps;
  if (static_cast<int>(mean_seq.size()) != N)
    throw std::invalid_argument("mppi_step: mean sequence length != horizon");

  const double sigma_v = std::sqrt(setup.mppi.noise_var_v);
  const double sigma_w = std::sqrt(setup.mppi.noise_var_omega);
  const AgentFrames frames =
      AgentFrames::build(obstacles, N, setup.dynamics.dt, setup.track);

  std::vector<double> costs(static_cast<std::size_t>(M));
  // Perturbations kept for the weighted update; states are consumed on the
  // fly.
  std::vector<ControlInput> eps(static_cast<std::size_t>(M) * N);

  for (int m = 0; m < M; ++m) {
    Splitmix64 rng = substream(seed, step_index, static_cast<std::uint64_t>(m));
    ControlInput* e = &eps[static_cast<std::size_t>(m) * N];
    BotState s = state;
    double total = 0.0;
    for (int k = 0; k < N; ++k) {
      const auto [z1, z2] = normal_pair(rng);
      e[k].v_des = sigma_v * z1;
      e[k].omega_des = sigma_w * z2;
      const ControlInput u{mean_seq[k].v_des + e[k].v_des,
                           mean_seq[k].omega_des + e[k].omega_des};
      s = step(s, u, setup.dynamics);
      total += step_cost(s, frames, k, setup);
    }
    costs[static_cast<std::size_t>(m)] = total;
  }

  ControlDecision d;
  d.weights = compute_weights(costs, setup.mppi.lambda);
  d.optimized.assign(mean_seq.begin(), mean_seq.end());
  for (int m = 0; m < M; ++m) {
    const double w = d.weights[static_cast<std::size_t>(m)];
    if (w == 0.0) continue;
    const ControlInput* e = &eps[static_cast<std::size_t>(m) * N];
    for (int k = 0; k < N; ++k) {
      d.optimized[static_cast<std::size_t>(k)].v_des += w * e[k].v_des;
      d.optimized[static_cast<std::size_t>(k)].omega_des += w * e[k].omega_des;
    }
  }
  d.applied = d.optimized.front();
  d.diagnostics = summarize(costs, d.weights);
  return d;
}

ControlDecision ompli_step(const BotState& state,
                           std::span<const ObstacleState> obstacles,
                           const ControlSetup& setup, std::uint64_t seed,
                           std::uint64_t step_index) {
  const int M = setup.mppi.rollouts;
  const int N = setup.mppi.horizon_steps;
  const double T = setup.mppi.horizon_seconds(setup.dynamics.dt);

  const AgentFrames frames =
      AgentFrames::build(obstacles, N, setup.dynamics.dt, setup.track);
  const RegionOfInterest roi =
      build_roi(state, T, setup.dynamics, setup.track, setup.roi);

  std::vector<double> costs(static_cast<std::size_t>(M), kInf);
  std::vector<ControlSequence> inputs(static_cast<std::size_t>(M));

  for (int m = 0; m < M; ++m) {
    Splitmix64 rng = substream(seed, step_index, static_cast<std::uint64_t>(m));
    try {
      const auto [xe, ye] =
          sample_endpoint(roi, setup.track, rng, setup.roi.max_rejections);
      const double he = endpoint_heading(xe, ye, setup.track);
      const OutputTrajectory traj = fit_spline(state, xe, ye, he, T, N);
      InverseResult inv = invert_trajectory(traj, state, setup.dynamics);

      double total = 0.0;
      for (int k = 0; k < N; ++k)
        total += step_cost(inv.planned_states[static_cast<std::size_t>(k)],
                           frames, k, setup);
      costs[static_cast<std::size_t>(m)] = total;
      inputs[static_cast<std::size_t>(m)] = std::move(inv.inputs);
    } catch (const ControllerError&) {
      // rollout discarded; weight 0
    }
  }

  ControlDecision d;
  d.weights = compute_weights(costs, setup.mppi.lambda);
  d.optimized.assign(static_cast<std::size_t>(N), ControlInput{0.0, 0.0});
  for (int m = 0; m < M; ++m) {
    const double w = d.weights[static_cast<std::size_t>(m)];
    if (w == 0.0) continue;
    const ControlSequence& u = inputs[static_cast<std::size_t>(m)];
    for (int k = 0; k < N; ++k) {
      d.optimized[static_cast<std::size_t>(k)].v_des +=
          w * u[static_cast<std::size_t>(k)].v_des;
      d.optimized[static_cast<std::size_t>(k)].omega_des +=
          w * u[static_cast<std::size_t>(k)].omega_des;
    }
  }
  d.applied = d.optimized.front();
  d.diagnostics = summarize(costs, d.weights);
  return d;
}

Rollout generate_mppi_rollout(const BotState& state,
                              std::span<const ControlInput> mean_seq,
                              const ControlSetup& setup, std::uint64_t seed,
                              std::uint64_t step_index, std::uint64_t m) {
  const std::size_t N = mean_seq.size();
  Splitmix64 rng = substream(seed, step_index, m);

  Rollout r;
  r.inputs.resize(N);
  r.perturbations.resize(N);
  r.states.reserve(N);
  r.outputs.reserve(N);

  const double sigma_v = std::sqrt(setup.mppi.noise_var_v);
  const double sigma_w = std::sqrt(setup.mppi.noise_var_omega);
  BotState s = state;
  for (std::size_t k = 0; k < N; ++k) {
    const auto [z1, z2] = normal_pair(rng);
    r.perturbations[k] = {sigma_v * z1, sigma_w * z2};
    r.inputs[k] = {mean_seq[k].v_des + r.perturbations[k].v_des,
                   mean_seq[k].omega_des + r.perturbations[k].omega_des};
    s = step(s, r.inputs[k], setup.dynamics);
    r.states.push_back(s);
    r.outputs.emplace_back(s.x, s.y);
  }
  return r;
}

}  // namespace ompli

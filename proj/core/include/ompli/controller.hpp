#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ompli/cost.hpp"
#include "ompli/dynamics.hpp"
#include "ompli/planner.hpp"
#include "ompli/track.hpp"

namespace ompli {

/// Sampling-controller parameters shared by both loops. The horizon in
/// seconds is horizon_steps * dt.
struct MppiParams {
  int rollouts = 50;       // M
  int horizon_steps = 50;  // N
  double lambda = 2.0;     // softmin temperature
  double noise_var_v = 4.0;        // Var of v_des perturbation, (cm/s)^2
  double noise_var_omega = 1.0;    // Var of omega_des perturbation, (rad/s)^2
  ControlInput initial_mean{15.0, 0.0};

  double horizon_seconds(double dt) const { return horizon_steps * dt; }

  void validate() const;  // throws ConfigError
};

/// Everything a control step needs besides the state and the obstacles.
struct ControlSetup {
  TrackSpec track;
  DynamicsParams dynamics;
  CostParams cost;
  CollisionGeom collision;
  MppiParams mppi;
  RoiParams roi;

  void validate() const;
};

using ControlSequence = std::vector<ControlInput>;

/// One candidate trajectory over the horizon. states/outputs hold the
/// post-step grid points 1..N. perturbations is filled only by the
/// input-space sampler.
struct Rollout {
  ControlSequence inputs;
  std::vector<BotState> states;
  std::vector<std::pair<double, double>> outputs;
  double cost = 0.0;
  ControlSequence perturbations;
};

struct DecisionDiagnostics {
  double min_cost = 0.0;
  double mean_cost = 0.0;
  double effective_samples = 0.0;  // 1 / sum w^2
  int rejected = 0;                // rollouts discarded (non-finite cost)
};

struct ControlDecision {
  ControlSequence optimized;  // weighted-average input sequence
  ControlInput applied;       // optimized.front()
  std::vector<double> weights;
  DecisionDiagnostics diagnostics;
};

/// Exponential softmin weights: w_m = exp(-(S_m - min S) / lambda),
/// normalized to sum 1. Non-finite costs get weight 0; throws
/// ControllerError if every cost is non-finite.
std::vector<double> compute_weights(std::span<const double> costs,
                                    double lambda);

/// Shift the previous optimized sequence one step and refill the tail.
ControlSequence warm_start(ControlSequence prev, ControlInput initial_mean);

/// Input-space sampling loop: Gaussian perturbations around mean_seq rolled
/// through the forward model and cost-weighted. Deterministic in
/// (seed, step_index) regardless of evaluation order.
ControlDecision mppi_step(const BotState& state,
                          std::span<const ControlInput> mean_seq,
                          std::span<const ObstacleState> obstacles,
                          const ControlSetup& setup, std::uint64_t seed,
                          std::uint64_t step_index);

/// Output-space sampling loop: endpoint draw, cubic fit, inversion, then the
/// same cost weighting. Rollouts whose sampling or inversion fails are
/// dropped from the average; throws ControllerError if none survive.
ControlDecision ompli_step(const BotState& state,
                           std::span<const ObstacleState> obstacles,
                           const ControlSetup& setup, std::uint64_t seed,
                           std::uint64_t step_index);

/// One input-space rollout materialized with its full state/output history
/// (cost left at 0). Same substream layout as mppi_step, so rollout m here
/// reproduces rollout m there.
Rollout generate_mppi_rollout(const BotState& state,
                              std::span<const ControlInput> mean_seq,
                              const ControlSetup& setup, std::uint64_t seed,
                              std::uint64_t step_index, std::uint64_t m);

}  // namespace ompli

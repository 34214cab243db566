// Command-line front end: run Monte Carlo batches or single traced episodes,
// sweep horizon/rollout tables, and measure rollout exploration areas.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ompli/errors.hpp"
#include "ompli/harness.hpp"
#include "ompli/scenario_io.hpp"

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct CommonOpts {
  std::string case_id;
  std::string config_path;
  std::string controller;
  int rollouts = -1;
  double horizon_s = -1.0;
  int trials = 100;
  std::optional<std::uint64_t> seed;
  double rate_hz = -1.0;
  std::string out_dir;
  int threads = 1;
};

struct FlagSet {
  bool trials = true;
  bool scalar_horizon_rollouts = true;
  bool scalar_rate = true;
};

void add_common_flags(CLI::App* cmd, CommonOpts& o, FlagSet flags = {}) {
  cmd->add_option("--case", o.case_id,
                  "Scenario preset: 1, 2, 3, 4 or multi");
  cmd->add_option("--config", o.config_path, "Scenario JSON file");
  cmd->add_option("--controller", o.controller,
                  "Override controller: mppi or ompli");
  if (flags.scalar_horizon_rollouts) {
    cmd->add_option("--rollouts", o.rollouts, "Override rollout count M");
    cmd->add_option("--horizon", o.horizon_s,
                    "Override prediction horizon T in seconds");
  }
  if (flags.trials)
    cmd->add_option("--trials", o.trials, "Monte Carlo episode count");
  cmd->add_option("--seed", o.seed, "Base random seed");
  if (flags.scalar_rate)
    cmd->add_option("--rate", o.rate_hz,
                    "Control rate in Hz (sets dt = 1/rate)");
  cmd->add_option("--out", o.out_dir, "Output directory for summary files");
  cmd->add_option("--threads", o.threads, "Worker threads for episodes");
}

ompli::ScenarioConfig resolve_config(const CommonOpts& o) {
  if (!o.case_id.empty() && !o.config_path.empty())
    throw ompli::ConfigError("give either --case or --config, not both");

  ompli::ScenarioConfig cfg;
  if (!o.config_path.empty()) {
    cfg = ompli::load_scenario(o.config_path);
  } else {
    cfg = ompli::case_preset(o.case_id.empty() ? "1" : o.case_id);
  }

  if (!o.controller.empty())
    cfg.controller = ompli::controller_kind_from_string(o.controller);
  if (o.rate_hz > 0.0) {
    // Keep the horizon in seconds fixed while changing the period.
    const double T = cfg.setup.mppi.horizon_seconds(cfg.setup.dynamics.dt);
    cfg.setup.dynamics.dt = 1.0 / o.rate_hz;
    cfg.setup.mppi.horizon_steps = std::max(
        1, static_cast<int>(std::llround(T / cfg.setup.dynamics.dt)));
  }
  if (o.rollouts > 0) cfg.setup.mppi.rollouts = o.rollouts;
  if (o.horizon_s > 0.0)
    cfg.setup.mppi.horizon_steps = std::max(
        1, static_cast<int>(std::llround(o.horizon_s / cfg.setup.dynamics.dt)));
  if (o.seed) cfg.seed = *o.seed;

  cfg.validate();
  return cfg;
}

Json report_to_json(const ompli::SuccessRateReport& r) {
  Json failures;
  for (int i = 0; i < ompli::kFailureReasonCount; ++i)
    failures[ompli::to_string(static_cast<ompli::FailureReason>(i))] =
        r.failure_counts[static_cast<std::size_t>(i)];
  return Json{{"trials", r.trials},
              {"successes", r.successes},
              {"rate_percent", r.rate_percent},
              {"failures", std::move(failures)}};
}

void write_file(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path().empty() ? "."
                                                    : path.parent_path());
  std::ofstream out(path);
  if (!out) throw ompli::ConfigError("cannot write " + path.string());
  out << text;
  if (text.empty() || text.back() != '\n') out << "\n";
}

void emit_summary(const CommonOpts& o, const char* name, Json summary) {
  if (!o.out_dir.empty())
    write_file(fs::path(o.out_dir) / name, summary.dump(2));
  else
    std::cout << summary.dump(2) << "\n";
}

int cmd_run(const CommonOpts& o, const std::string& trace_path) {
  ompli::ScenarioConfig cfg = resolve_config(o);

  Json summary;
  summary["command"] = "run";
  summary["config"] = Json::parse(ompli::scenario_to_json(cfg));
  summary["config"]["trials"] = o.trials;

  if (!trace_path.empty()) {
    cfg.record_trace = true;
    const ompli::EpisodeResult result = ompli::run_episode(cfg);
    std::ofstream out(trace_path);
    if (!out) throw ompli::ConfigError("cannot write " + trace_path);
    ompli::write_trace_csv(out, result);

    summary["config"]["trials"] = 1;
    summary["results"] = {
        {"trials", 1},
        {"successes", result.success ? 1 : 0},
        {"rate_percent", result.success ? 100.0 : 0.0},
        {"failure_reason",
         result.failure ? Json(ompli::to_string(*result.failure)) : Json(nullptr)},
        {"duration_s", result.duration_s},
        {"trace_rows", result.trace.size()},
    };
    summary["timing"] = Json::object();
    emit_summary(o, "summary.json", summary);
    std::printf("episode: %s (%.2f s simulated), trace -> %s\n",
                result.success ? "success"
                               : ompli::to_string(*result.failure),
                result.duration_s, trace_path.c_str());
    return 0;
  }

  const ompli::SuccessRateReport report =
      ompli::monte_carlo(cfg, o.trials, cfg.seed, o.threads);
  summary["results"] = report_to_json(report);
  summary["timing"] = {{"total_seconds", report.total_wall_s},
                       {"mean_episode_seconds", report.mean_episode_wall_s}};
  emit_summary(o, "summary.json", summary);
  std::printf("success rate: %.1f%% (%d/%d)\n", report.rate_percent,
              report.successes, report.trials);
  return 0;
}

int cmd_table(const CommonOpts& o, const std::vector<double>& horizons,
              const std::vector<int>& rollout_counts) {
  if (horizons.empty()) throw ompli::ConfigError("table: --horizon list is empty");
  if (rollout_counts.empty())
    throw ompli::ConfigError("table: --rollouts list is empty");

  const ompli::ScenarioConfig base = resolve_config(o);

  Json summary;
  summary["command"] = "table";
  summary["config"] = Json::parse(ompli::scenario_to_json(base));
  summary["config"]["trials"] = o.trials;
  summary["sweep"] = {{"horizons_s", horizons}, {"rollouts", rollout_counts}};
  summary["rows"] = Json::array();

  double total_wall = 0.0;
  for (double T : horizons) {
    for (int M : rollout_counts) {
      ompli::ScenarioConfig cfg = base;
      cfg.setup.mppi.horizon_steps = std::max(
          1, static_cast<int>(std::llround(T / cfg.setup.dynamics.dt)));
      cfg.setup.mppi.rollouts = M;
      cfg.validate();
      const ompli::SuccessRateReport report =
          ompli::monte_carlo(cfg, o.trials, cfg.seed, o.threads);
      total_wall += report.total_wall_s;

      Json row = report_to_json(report);
      row["horizon_s"] = cfg.setup.mppi.horizon_seconds(cfg.setup.dynamics.dt);
      row["rollouts"] = M;
      summary["rows"].push_back(std::move(row));
      std::printf("T=%.1f s  M=%-5d  success rate %.1f%% (%d/%d)\n", T, M,
                  report.rate_percent, report.successes, report.trials);
    }
  }
  summary["timing"] = {{"total_seconds", total_wall}};
  emit_summary(o, "table.json", summary);
  return 0;
}

int cmd_explore(const CommonOpts& o, const std::vector<double>& rates,
                bool dump_grids) {
  if (rates.empty()) throw ompli::ConfigError("explore: --rate list is empty");
  for (double r : rates)
    if (!(r > 0.0)) throw ompli::ConfigError("explore: rates must be > 0");

  CommonOpts base_opts = o;
  if (base_opts.case_id.empty() && base_opts.config_path.empty())
    base_opts.case_id = "2";  // input-space sampler
  const ompli::ScenarioConfig cfg = resolve_config(base_opts);
  const double horizon_s =
      cfg.setup.mppi.horizon_seconds(cfg.setup.dynamics.dt);

  Json summary;
  summary["command"] = "explore";
  summary["config"] = Json::parse(ompli::scenario_to_json(cfg));
  summary["rates_hz"] = rates;
  summary["areas_cm2"] = Json::array();

  const auto t0 = std::chrono::steady_clock::now();
  for (double rate : rates) {
    const ompli::OccupancyGrid grid = ompli::exploration_grid(
        cfg.initial_state, cfg.setup, rate, horizon_s, cfg.seed);
    summary["areas_cm2"].push_back(grid.area());
    std::printf("rate %6.1f Hz  explored area %8.0f cm^2\n", rate, grid.area());

    if (dump_grids && !o.out_dir.empty()) {
      char name[64];
      std::snprintf(name, sizeof name, "explore_grid_%ghz.pgm", rate);
      std::ostringstream pgm;
      pgm << "P2\n" << grid.nx << " " << grid.ny << "\n1\n";
      for (int row = grid.ny - 1; row >= 0; --row) {
        for (int col = 0; col < grid.nx; ++col) {
          pgm << int(grid.cells[static_cast<std::size_t>(row) * grid.nx + col]);
          pgm << (col + 1 == grid.nx ? '\n' : ' ');
        }
      }
      write_file(fs::path(o.out_dir) / name, pgm.str());
    }
  }
  const auto t1 = std::chrono::steady_clock::now();
  summary["timing"] = {
      {"total_seconds", std::chrono::duration<double>(t1 - t0).count()}};
  emit_summary(o, "explore.json", summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Two-lane stadium overtaking benchmark: input-sampled (mppi) and "
      "output-sampled (ompli) path-integral controllers"};
  app.require_subcommand(1);

  CommonOpts run_opts;
  std::string trace_path;
  CLI::App* run = app.add_subcommand(
      "run", "Monte Carlo success rate, or one traced episode with --trace");
  add_common_flags(run, run_opts);
  run->add_option("--trace", trace_path,
                  "Write a single episode trace CSV to this path");

  CommonOpts table_opts;
  std::vector<double> horizons;
  std::vector<int> rollout_counts;
  CLI::App* table = app.add_subcommand(
      "table", "Success-rate table over horizon x rollout-count cells");
  add_common_flags(table, table_opts,
                   {.trials = true, .scalar_horizon_rollouts = false});
  table->add_option("--horizon", horizons, "Horizon list, e.g. 2,4,6,8 (s)")
      ->delimiter(',');
  table->add_option("--rollouts", rollout_counts, "Rollout list, e.g. 50,1000")
      ->delimiter(',');

  CommonOpts explore_opts;
  std::vector<double> rates;
  bool dump_grids = false;
  CLI::App* explore = app.add_subcommand(
      "explore", "Occupancy-grid exploration area per control rate");
  add_common_flags(
      explore, explore_opts,
      {.trials = false, .scalar_horizon_rollouts = true, .scalar_rate = false});
  explore->add_option("--rate", rates, "Control rate list, e.g. 25,50,100 (Hz)")
      ->delimiter(',');
  explore->add_flag("--dump-grids", dump_grids,
                    "Also write per-rate occupancy grids (PGM) to --out");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_opts, trace_path);
    if (table->parsed()) return cmd_table(table_opts, horizons, rollout_counts);
    if (explore->parsed()) return cmd_explore(explore_opts, rates, dump_grids);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

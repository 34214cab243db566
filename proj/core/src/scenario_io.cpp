#include "ompli/scenario_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "ompli/errors.hpp"

namespace ompli {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config error at " + path + ": " + what);
}

void check_known_keys(const Json& obj, const std::string& path,
                      std::initializer_list<const char*> known) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) fail(path.empty() ? key : path + "." + key, "unknown field");
  }
}

double get_number(const Json& obj, const std::string& path, const char* key,
                  double fallback) {
  if (!obj.contains(key)) return fallback;
  const Json& v = obj.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

Json state_to_json(const BotState& s) {
  return Json{{"x", s.x}, {"y", s.y}, {"theta", s.theta}, {"v", s.v},
              {"omega", s.omega}};
}

BotState state_from_json(const Json& obj, const std::string& path) {
  check_known_keys(obj, path, {"x", "y", "theta", "v", "omega"});
  BotState s;
  s.x = get_number(obj, path, "x", 0.0);
  s.y = get_number(obj, path, "y", 0.0);
  s.theta = get_number(obj, path, "theta", 0.0);
  s.v = get_number(obj, path, "v", 0.0);
  s.omega = get_number(obj, path, "omega", 0.0);
  return s;
}

}  // namespace

const char* to_string(ControllerKind kind) {
  return kind == ControllerKind::Mppi ? "mppi" : "ompli";
}

ControllerKind controller_kind_from_string(const std::string& name) {
  if (name == "mppi") return ControllerKind::Mppi;
  if (name == "ompli") return ControllerKind::Ompli;
  throw ConfigError("controller: expected \"mppi\" or \"ompli\", got \"" +
                    name + "\"");
}

const char* to_string(LaneId lane) {
  return lane == LaneId::Inner ? "inner" : "outer";
}

ScenarioConfig scenario_from_json(const std::string& text,
                                  const std::string& origin) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  if (!root.is_object()) throw ConfigError(origin + ": expected a JSON object");

  check_known_keys(root, "",
                   {"controller", "seed", "track", "dynamics", "cost",
                    "collision", "mppi", "roi", "initial_state", "obstacles",
                    "termination", "success_deadline_s", "record_trace",
                    "stop_on_failure"});

  ScenarioConfig cfg;

  if (root.contains("controller")) {
    if (!root["controller"].is_string()) fail("controller", "expected a string");
    cfg.controller =
        controller_kind_from_string(root["controller"].get<std::string>());
  }
  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned())
      fail("seed", "expected a non-negative integer");
    cfg.seed = root["seed"].get<std::uint64_t>();
  }

  if (root.contains("track")) {
    const Json& t = root["track"];
    check_known_keys(t, "track",
                     {"lane_width", "straight_length", "inner_radius"});
    cfg.setup.track.lane_width =
        get_number(t, "track", "lane_width", cfg.setup.track.lane_width);
    cfg.setup.track.straight_length = get_number(
        t, "track", "straight_length", cfg.setup.track.straight_length);
    cfg.setup.track.inner_radius =
        get_number(t, "track", "inner_radius", cfg.setup.track.inner_radius);
  }

  if (root.contains("dynamics")) {
    const Json& d = root["dynamics"];
    check_known_keys(d, "dynamics", {"dt", "alpha", "v_max", "omega_max"});
    cfg.setup.dynamics.dt =
        get_number(d, "dynamics", "dt", cfg.setup.dynamics.dt);
    cfg.setup.dynamics.alpha =
        get_number(d, "dynamics", "alpha", cfg.setup.dynamics.alpha);
    cfg.setup.dynamics.v_max =
        get_number(d, "dynamics", "v_max", cfg.setup.dynamics.v_max);
    cfg.setup.dynamics.omega_max =
        get_number(d, "dynamics", "omega_max", cfg.setup.dynamics.omega_max);
  }

  if (root.contains("cost")) {
    const Json& c = root["cost"];
    check_known_keys(c, "cost",
                     {"w_lane", "w_track", "w_speed", "v_target",
                      "collision_penalty", "input_weight_r",
                      "terminal_weight_phi", "input_deviation_gamma"});
    auto& p = cfg.setup.cost;
    p.w_lane = get_number(c, "cost", "w_lane", p.w_lane);
    p.w_track = get_number(c, "cost", "w_track", p.w_track);
    p.w_speed = get_number(c, "cost", "w_speed", p.w_speed);
    p.v_target = get_number(c, "cost", "v_target", p.v_target);
    p.collision_penalty =
        get_number(c, "cost", "collision_penalty", p.collision_penalty);
    p.input_weight_r = get_number(c, "cost", "input_weight_r", 0.0);
    p.terminal_weight_phi = get_number(c, "cost", "terminal_weight_phi", 0.0);
    p.input_deviation_gamma =
        get_number(c, "cost", "input_deviation_gamma", 0.0);
  }

  if (root.contains("collision")) {
    const Json& c = root["collision"];
    check_known_keys(c, "collision", {"length", "width", "turning_radius"});
    auto& g = cfg.setup.collision;
    g.length = get_number(c, "collision", "length", g.length);
    g.width = get_number(c, "collision", "width", g.width);
    g.turning_radius =
        get_number(c, "collision", "turning_radius", g.turning_radius);
  }

  if (root.contains("mppi")) {
    const Json& m = root["mppi"];
    check_known_keys(
        m, "mppi",
        {"rollouts", "horizon_s", "lambda", "noise_variance", "initial_mean"});
    auto& p = cfg.setup.mppi;
    if (m.contains("rollouts")) {
      if (!m["rollouts"].is_number_integer())
        fail("mppi.rollouts", "expected an integer");
      p.rollouts = m["rollouts"].get<int>();
    }
    if (m.contains("horizon_s")) {
      const double T = get_number(m, "mppi", "horizon_s", 2.0);
      if (!(T > 0.0)) fail("mppi.horizon_s", "must be > 0");
      p.horizon_steps =
          static_cast<int>(std::llround(T / cfg.setup.dynamics.dt));
      if (p.horizon_steps < 1) fail("mppi.horizon_s", "shorter than one step");
    }
    p.lambda = get_number(m, "mppi", "lambda", p.lambda);
    if (m.contains("noise_variance")) {
      const Json& nv = m["noise_variance"];
      check_known_keys(nv, "mppi.noise_variance", {"v_des", "omega_des"});
      p.noise_var_v =
          get_number(nv, "mppi.noise_variance", "v_des", p.noise_var_v);
      p.noise_var_omega = get_number(nv, "mppi.noise_variance", "omega_des",
                                     p.noise_var_omega);
    }
    if (m.contains("initial_mean")) {
      const Json& im = m["initial_mean"];
      check_known_keys(im, "mppi.initial_mean", {"v_des", "omega_des"});
      p.initial_mean.v_des =
          get_number(im, "mppi.initial_mean", "v_des", p.initial_mean.v_des);
      p.initial_mean.omega_des = get_number(im, "mppi.initial_mean",
                                            "omega_des",
                                            p.initial_mean.omega_des);
    }
  }

  if (root.contains("roi")) {
    const Json& r = root["roi"];
    check_known_keys(r, "roi",
                     {"forward_min_frac", "forward_max_frac", "max_rejections"});
    auto& p = cfg.setup.roi;
    p.forward_min_frac =
        get_number(r, "roi", "forward_min_frac", p.forward_min_frac);
    p.forward_max_frac =
        get_number(r, "roi", "forward_max_frac", p.forward_max_frac);
    if (r.contains("max_rejections")) {
      if (!r["max_rejections"].is_number_integer())
        fail("roi.max_rejections", "expected an integer");
      p.max_rejections = r["max_rejections"].get<int>();
    }
  }

  if (root.contains("initial_state"))
    cfg.initial_state = state_from_json(root["initial_state"], "initial_state");

  if (root.contains("obstacles")) {
    const Json& list = root["obstacles"];
    if (!list.is_array()) fail("obstacles", "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string path = "obstacles[" + std::to_string(i) + "]";
      const Json& item = list[i];
      if (!item.is_object()) fail(path, "expected an object");
      check_known_keys(item, path, {"lane", "arc_position", "position", "speed"});
      ObstacleSpec spec;
      if (!item.contains("lane")) fail(path + ".lane", "required");
      const std::string lane = item["lane"].get<std::string>();
      if (lane == "inner") spec.lane = LaneId::Inner;
      else if (lane == "outer") spec.lane = LaneId::Outer;
      else fail(path + ".lane", "expected \"inner\" or \"outer\"");
      if (item.contains("arc_position"))
        spec.arc_position = get_number(item, path, "arc_position", 0.0);
      if (item.contains("position")) {
        const Json& pos = item["position"];
        check_known_keys(pos, path + ".position", {"x", "y"});
        spec.position = {get_number(pos, path + ".position", "x", 0.0),
                         get_number(pos, path + ".position", "y", 0.0)};
      }
      spec.speed = get_number(item, path, "speed", 0.0);
      cfg.obstacles.push_back(spec);
    }
  }

  if (root.contains("termination")) {
    const Json& t = root["termination"];
    check_known_keys(t, "termination", {"obstacle_travel", "max_duration_s"});
    if (t.contains("obstacle_travel") && !t["obstacle_travel"].is_null())
      cfg.termination.obstacle_travel =
          get_number(t, "termination", "obstacle_travel", 0.0);
    if (t.contains("max_duration_s") && !t["max_duration_s"].is_null())
      cfg.termination.max_duration_s =
          get_number(t, "termination", "max_duration_s", 0.0);
  }

  if (root.contains("success_deadline_s") &&
      !root["success_deadline_s"].is_null())
    cfg.success_deadline_s = get_number(root, "", "success_deadline_s", 0.0);

  if (root.contains("record_trace")) {
    if (!root["record_trace"].is_boolean())
      fail("record_trace", "expected a boolean");
    cfg.record_trace = root["record_trace"].get<bool>();
  }
  if (root.contains("stop_on_failure")) {
    if (!root["stop_on_failure"].is_boolean())
      fail("stop_on_failure", "expected a boolean");
    cfg.stop_on_failure = root["stop_on_failure"].get<bool>();
  }

  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return scenario_from_json(buf.str(), path.string());
}

std::string scenario_to_json(const ScenarioConfig& cfg, int indent) {
  const auto& s = cfg.setup;
  Json root;
  root["controller"] = to_string(cfg.controller);
  root["seed"] = cfg.seed;
  root["track"] = {{"lane_width", s.track.lane_width},
                   {"straight_length", s.track.straight_length},
                   {"inner_radius", s.track.inner_radius}};
  root["dynamics"] = {{"dt", s.dynamics.dt},
                      {"alpha", s.dynamics.alpha},
                      {"v_max", s.dynamics.v_max},
                      {"omega_max", s.dynamics.omega_max}};
  root["cost"] = {{"w_lane", s.cost.w_lane},
                  {"w_track", s.cost.w_track},
                  {"w_speed", s.cost.w_speed},
                  {"v_target", s.cost.v_target},
                  {"collision_penalty", s.cost.collision_penalty},
                  {"input_weight_r", s.cost.input_weight_r},
                  {"terminal_weight_phi", s.cost.terminal_weight_phi},
                  {"input_deviation_gamma", s.cost.input_deviation_gamma}};
  root["collision"] = {{"length", s.collision.length},
                       {"width", s.collision.width},
                       {"turning_radius", s.collision.turning_radius}};
  root["mppi"] = {
      {"rollouts", s.mppi.rollouts},
      {"horizon_s", s.mppi.horizon_seconds(s.dynamics.dt)},
      {"lambda", s.mppi.lambda},
      {"noise_variance",
       Json{{"v_des", s.mppi.noise_var_v}, {"omega_des", s.mppi.noise_var_omega}}},
      {"initial_mean", Json{{"v_des", s.mppi.initial_mean.v_des},
                            {"omega_des", s.mppi.initial_mean.omega_des}}}};
  root["roi"] = {{"forward_min_frac", s.roi.forward_min_frac},
                 {"forward_max_frac", s.roi.forward_max_frac},
                 {"max_rejections", s.roi.max_rejections}};
  root["initial_state"] = state_to_json(cfg.initial_state);
  root["obstacles"] = Json::array();
  for (const auto& o : cfg.obstacles) {
    Json item;
    item["lane"] = to_string(o.lane);
    if (o.arc_position) item["arc_position"] = *o.arc_position;
    if (o.position)
      item["position"] = Json{{"x", o.position->first}, {"y", o.position->second}};
    item["speed"] = o.speed;
    root["obstacles"].push_back(std::move(item));
  }
  root["termination"] = Json::object();
  root["termination"]["obstacle_travel"] =
      cfg.termination.obstacle_travel ? Json(*cfg.termination.obstacle_travel)
                                      : Json(nullptr);
  root["termination"]["max_duration_s"] =
      cfg.termination.max_duration_s ? Json(*cfg.termination.max_duration_s)
                                     : Json(nullptr);
  root["success_deadline_s"] =
      cfg.success_deadline_s ? Json(*cfg.success_deadline_s) : Json(nullptr);
  root["record_trace"] = cfg.record_trace;
  root["stop_on_failure"] = cfg.stop_on_failure;
  return root.dump(indent);
}

void write_trace_csv(std::ostream& out, const EpisodeResult& result) {
  const std::size_t n_obs =
      result.trace.empty() ? 0 : result.trace.front().obstacles.size();
  out << "t,x,y,theta,v,omega,v_des,omega_des,step_cost";
  for (std::size_t i = 0; i < n_obs; ++i)
    out << ",obs" << i << "_x,obs" << i << "_y,obs" << i << "_theta";
  out << "\n";

  char buf[32];
  const auto put = [&](double v, char sep) {
    std::snprintf(buf, sizeof buf, "%.12g", v);
    out << buf << sep;
  };
  for (const auto& rec : result.trace) {
    put(rec.t, ',');
    put(rec.state.x, ',');
    put(rec.state.y, ',');
    put(rec.state.theta, ',');
    put(rec.state.v, ',');
    put(rec.state.omega, ',');
    put(rec.applied.v_des, ',');
    put(rec.applied.omega_des, ',');
    std::snprintf(buf, sizeof buf, "%.12g", rec.step_cost);
    out << buf;
    for (const auto& pose : rec.obstacles) {
      out << ',';
      put(pose.x, ',');
      put(pose.y, ',');
      std::snprintf(buf, sizeof buf, "%.12g", pose.theta);
      out << buf;
    }
    out << "\n";
  }
}

}  // namespace ompli

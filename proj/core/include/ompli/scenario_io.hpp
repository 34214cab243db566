#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "ompli/harness.hpp"

namespace ompli {

/// Parse a scenario from JSON text. `origin` names the source in
/// diagnostics. Unknown keys and out-of-range values raise ConfigError with
/// the offending field path.
ScenarioConfig scenario_from_json(const std::string& text,
                                  const std::string& origin);
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Full resolved configuration echo (stable key order).
std::string scenario_to_json(const ScenarioConfig& cfg, int indent = 2);

/// One row per control step:
/// t,x,y,theta,v,omega,v_des,omega_des,step_cost,obs<i>_x,obs<i>_y,obs<i>_theta...
void write_trace_csv(std::ostream& out, const EpisodeResult& result);

const char* to_string(ControllerKind kind);
ControllerKind controller_kind_from_string(const std::string& name);
const char* to_string(LaneId lane);

}  // namespace ompli

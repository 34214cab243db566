#pragma once

#include <stdexcept>
#include <string>

namespace ompli {

/// Invalid scenario/parameter values. The message names the offending field.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A control step could not produce a usable decision (e.g. every rollout
/// was rejected). The episode driver records this and marks the run failed.
struct ControllerError : std::runtime_error {
  explicit ControllerError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ompli

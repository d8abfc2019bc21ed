#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "utpp/sim.hpp"

namespace utpp {

/// Reads an INI-style scenario file. See docs/config.md for the format.
///
/// Angles are degrees in the file and radians in the returned Scenario.
/// Unknown sections or keys, unparsable numbers and Scenario invariant
/// violations all throw ConfigError with the offending key in the message.
/// A waypoint road's `file` is resolved relative to the config's directory.
Scenario parse_config(const std::filesystem::path& path);

/// Same as parse_config, reading from a string. Relative waypoint files are
/// resolved against base_dir.
Scenario parse_config_text(const std::string& text, const std::filesystem::path& base_dir);

/// Command-line overrides applied on top of a parsed config.
struct ScenarioOverrides {
  std::optional<Controller> controller;
  std::optional<std::uint64_t> seed;
  std::optional<int> steps;
  std::optional<bool> noise;
  std::optional<std::filesystem::path> waypoint_file;
};

/// Applies overrides and re-validates. Turning noise on for a config that
/// has no [noise] section is a ConfigError; turning it off drops the noise
/// model, or zeroes its covariance for utpp, which still needs one.
Scenario apply_overrides(Scenario scenario, const ScenarioOverrides& overrides);

std::optional<Controller> parse_controller(std::string_view name);

}  // namespace utpp

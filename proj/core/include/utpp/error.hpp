#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace utpp {

/// Recoverable per-step failures. The simulation loop catches these, tags the
/// record and keeps going; everywhere else they surface as FaultError.
enum class Fault {
  perpendicular_line,
  path_out_of_reach,
  no_forward_intersection,
  no_intersection,
  degenerate_center,
  degenerate_scaling,
  non_positive_speed,
  too_few_waypoints,
  coincident_points,
};

std::string_view to_string(Fault f) noexcept;

class FaultError : public std::runtime_error {
 public:
  FaultError(Fault code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Fault code() const noexcept { return code_; }

 private:
  Fault code_;
};

/// Scenario/config validation failure. Message names the offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace utpp

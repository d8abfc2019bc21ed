#include "utpp/pursuit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "utpp/error.hpp"

namespace utpp {

namespace {

constexpr double kFlatSlope = 1e-12;
// acos arguments this far past +/-1 are treated as tangency, not a miss.
constexpr double kTangentSlack = 1e-12;

}  // namespace

bool PursuitConfig::is_valid() const {
  return std::isfinite(wheelbase) && wheelbase > 0.0 && std::isfinite(lookahead_gain) &&
         lookahead_gain > 0.0 && steering_limit > 0.0 &&
         steering_limit < std::numbers::pi / 2.0;
}

double lookahead_distance(double speed, const PursuitConfig& cfg) {
  if (!(speed > 0.0)) {
    throw FaultError(Fault::non_positive_speed,
                     "speed must be positive, got " + std::to_string(speed));
  }
  return cfg.lookahead_gain * speed;
}

CrossTrack cross_track_line(const StraightLine& line, double lookahead) {
  const double m = line.slope;
  const double c = line.intercept;
  const double one_m2 = 1.0 + m * m;
  const double disc = one_m2 * lookahead * lookahead - c * c;
  if (disc < 0.0) {
    throw FaultError(Fault::path_out_of_reach,
                     "road line lies beyond the look-ahead distance");
  }
  const double root = std::sqrt(disc);
  CrossTrack ct;
  if (std::abs(m) < kFlatSlope) {
    ct.y_e = c;
    ct.x_e = root;
    return ct;
  }
  ct.y_e = (c + m * root) / one_m2;
  // Same root as (y_e - c) / m, without dividing by a small slope.
  ct.x_e = (root - c * m) / one_m2;
  if (ct.x_e < 0.0) {
    throw FaultError(Fault::no_forward_intersection,
                     "road line only meets the look-ahead circle behind the vehicle");
  }
  return ct;
}

CrossTrack cross_track_circle(const Circle& circle, double lookahead) {
  const double dist = std::hypot(circle.center_x, circle.center_y);
  if (dist == 0.0) {
    throw FaultError(Fault::degenerate_center, "vehicle is at the road circle center");
  }
  double cos_a1 = (dist * dist + lookahead * lookahead - circle.radius * circle.radius) /
                  (2.0 * lookahead * dist);
  if (std::abs(cos_a1) > 1.0 + kTangentSlack || !std::isfinite(cos_a1)) {
    throw FaultError(Fault::no_intersection,
                     "look-ahead circle does not meet the road circle");
  }
  cos_a1 = std::clamp(cos_a1, -1.0, 1.0);
  const double a1 = std::acos(cos_a1);
  const double a2 = std::atan2(circle.center_y, circle.center_x);
  const double plus = normalize_angle(a2 + a1);
  const double minus = normalize_angle(a2 - a1);

  CrossTrack ct;
  double chosen;
  if (std::abs(plus) == std::abs(minus)) {
    chosen = std::max(plus, minus);
    ct.tie_break = plus != minus;
  } else {
    chosen = std::abs(plus) < std::abs(minus) ? plus : minus;
  }
  ct.y_e = lookahead * std::sin(chosen);
  ct.x_e = lookahead * std::cos(chosen);
  if (ct.x_e < 0.0) {
    throw FaultError(Fault::no_forward_intersection,
                     "road circle only meets the look-ahead circle behind the vehicle");
  }
  return ct;
}

double steering_angle(double y_e, double lookahead, const PursuitConfig& cfg) {
  const double raw = std::atan(2.0 * y_e * cfg.wheelbase / (lookahead * lookahead));
  return std::clamp(raw, -cfg.steering_limit, cfg.steering_limit);
}

double turning_radius(double y_e, double lookahead) {
  if (y_e == 0.0) return std::numeric_limits<double>::infinity();
  return lookahead * lookahead / (2.0 * y_e);
}

}  // namespace utpp

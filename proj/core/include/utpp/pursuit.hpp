#pragma once

#include <numbers>

#include "utpp/geometry.hpp"

namespace utpp {

struct PursuitConfig {
  double wheelbase = 1.0;        // m
  double lookahead_gain = 1.0;   // s
  double steering_limit = 35.0 * std::numbers::pi / 180.0;  // rad, symmetric

  bool is_valid() const;
};

/// Look-ahead point in the vehicle frame. x_e^2 + y_e^2 = d_l^2 and x_e >= 0.
struct CrossTrack {
  double y_e = 0.0;
  double x_e = 0.0;
  /// Circle case only: both intersection candidates had equal |angle| and the
  /// positive one was taken.
  bool tie_break = false;
};

/// d_l = K_d * v. Throws FaultError(non_positive_speed) for speed <= 0.
double lookahead_distance(double speed, const PursuitConfig& cfg);

/// Forward intersection of the look-ahead circle with a vehicle-frame line.
/// Throws path_out_of_reach when the line misses the circle and
/// no_forward_intersection when it only crosses behind the rear axle.
CrossTrack cross_track_line(const StraightLine& line, double lookahead);

/// Intersection of the look-ahead circle with a vehicle-frame road circle,
/// choosing the candidate closest to the current heading. The sign of that
/// angle is kept so roads curving right produce negative y_e.
///
/// Throws degenerate_center when the rear axle sits on the road circle's
/// center, no_intersection when the two circles do not meet, and
/// no_forward_intersection when both meeting points are behind the axle.
CrossTrack cross_track_circle(const Circle& circle, double lookahead);

/// atan(2 y_e L / d_l^2), clamped to the steering limit.
double steering_angle(double y_e, double lookahead, const PursuitConfig& cfg);

/// Arc radius through the look-ahead point, d_l^2 / (2 y_e). Infinite on-path.
double turning_radius(double y_e, double lookahead);

}  // namespace utpp

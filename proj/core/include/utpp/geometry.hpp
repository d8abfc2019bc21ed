#pragma once

#include <cmath>
#include <numbers>

namespace utpp {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Planar pose of the rear axle in the global frame. Also used as a sigma point.
/// Every operation that produces a Pose keeps yaw in (-pi, pi].
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;

  Point2 position() const { return {x, y}; }

  friend bool operator==(const Pose&, const Pose&) = default;
};

/// y = slope * x + intercept. The frame (global or vehicle) is tracked by the
/// caller.
struct StraightLine {
  double slope = 0.0;
  double intercept = 0.0;
};

struct Circle {
  double center_x = 0.0;
  double center_y = 0.0;
  double radius = 1.0;

  Point2 center() const { return {center_x, center_y}; }
};

/// Wraps an angle into (-pi, pi].
double normalize_angle(double angle);

/// Steepest global slope accepted for a road line: tan(89.9 deg).
inline const double kMaxRoadSlope = std::tan(89.9 * std::numbers::pi / 180.0);

/// |cos| below this marks a line perpendicular to the vehicle x-axis.
inline constexpr double kPerpendicularCosEps = 1e-9;

Point2 vehicle_to_global(Point2 p, const Pose& frame);
Point2 global_to_vehicle(Point2 p, const Pose& frame);

/// Re-expresses a global line in the frame of `frame`.
/// Throws FaultError(perpendicular_line) if the line is perpendicular to the
/// vehicle x-axis, where the vehicle-frame intercept does not exist.
StraightLine line_to_vehicle(const StraightLine& line, const Pose& frame);

/// Only the center moves; the radius is frame-invariant.
Circle circle_to_vehicle(const Circle& circle, const Pose& frame);

bool is_finite(const Pose& p);

}  // namespace utpp

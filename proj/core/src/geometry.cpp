#include "utpp/geometry.hpp"

#include <string>

#include "utpp/error.hpp"

namespace utpp {

double normalize_angle(double angle) {
  double a = std::remainder(angle, 2.0 * std::numbers::pi);
  if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

Point2 vehicle_to_global(Point2 p, const Pose& frame) {
  const double c = std::cos(frame.yaw);
  const double s = std::sin(frame.yaw);
  return {c * p.x - s * p.y + frame.x, s * p.x + c * p.y + frame.y};
}

Point2 global_to_vehicle(Point2 p, const Pose& frame) {
  const double c = std::cos(frame.yaw);
  const double s = std::sin(frame.yaw);
  const double dx = p.x - frame.x;
  const double dy = p.y - frame.y;
  return {c * dx + s * dy, -s * dx + c * dy};
}

StraightLine line_to_vehicle(const StraightLine& line, const Pose& frame) {
  const double line_heading = std::atan(line.slope);
  const double relative = line_heading - frame.yaw;
  const double cos_rel = std::cos(relative);
  if (std::abs(cos_rel) < kPerpendicularCosEps) {
    throw FaultError(Fault::perpendicular_line,
                     "road line is perpendicular to the vehicle x-axis");
  }
  StraightLine out;
  out.slope = std::sin(relative) / cos_rel;
  out.intercept = (frame.x * std::sin(line_heading) +
                   (line.intercept - frame.y) * std::cos(line_heading)) /
                  cos_rel;
  return out;
}

Circle circle_to_vehicle(const Circle& circle, const Pose& frame) {
  const Point2 c = global_to_vehicle(circle.center(), frame);
  return {c.x, c.y, circle.radius};
}

bool is_finite(const Pose& p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.yaw);
}

}  // namespace utpp

#include "utpp/vehicle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "utpp/detail/overloaded.hpp"

namespace utpp {

using detail::overloaded;

NoiseEngine make_noise_engine(std::uint64_t seed, std::uint64_t run_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(run_index & 0xffffffffu),
                    static_cast<std::uint32_t>(run_index >> 32)};
  return NoiseEngine(seq);
}

Pose advance_pose(const Pose& pose, double delta, double speed, double dt,
                  double wheelbase) {
  const double step = speed * dt;
  const double beta = step / wheelbase * std::tan(delta);
  const Point2 body{step * std::cos(beta), step * std::sin(beta)};
  const Point2 moved = vehicle_to_global(body, pose);
  return {moved.x, moved.y, normalize_angle(pose.yaw + beta)};
}

namespace {

Point2 nearest_on_line(const StraightLine& line, Point2 p) {
  // Foot of the perpendicular onto y = m x + c.
  const double m = line.slope;
  const double t = (p.x + m * (p.y - line.intercept)) / (1.0 + m * m);
  return {t, m * t + line.intercept};
}

Point2 nearest_on_circle(const Circle& c, Point2 p) {
  const double dx = p.x - c.center_x;
  const double dy = p.y - c.center_y;
  const double r = std::hypot(dx, dy);
  if (r == 0.0) return {c.center_x + c.radius, c.center_y};
  return {c.center_x + dx * c.radius / r, c.center_y + dy * c.radius / r};
}

struct SegmentHit {
  Point2 point;
  std::size_t segment = 0;
};

SegmentHit nearest_on_path(const WaypointPath& path, Point2 p) {
  SegmentHit best;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const Point2 a = path[i], b = path[i + 1];
    const double ex = b.x - a.x, ey = b.y - a.y;
    double t = ((p.x - a.x) * ex + (p.y - a.y) * ey) / (ex * ex + ey * ey);
    t = std::clamp(t, 0.0, 1.0);
    const Point2 q{a.x + t * ex, a.y + t * ey};
    const double d2 = (p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = {q, i};
    }
  }
  return best;
}

}  // namespace

Point2 nearest_road_point(const RoadModel& road, Point2 p) {
  return std::visit(
      overloaded{[&](const StraightLine& l) { return nearest_on_line(l, p); },
                 [&](const Circle& c) { return nearest_on_circle(c, p); },
                 [&](const WaypointPath& w) { return nearest_on_path(w, p).point; }},
      road);
}

double lateral_error(const RoadModel& road, Point2 p) {
  return std::visit(
      overloaded{
          [&](const StraightLine& l) {
            return (p.y - l.slope * p.x - l.intercept) / std::sqrt(1.0 + l.slope * l.slope);
          },
          [&](const Circle& c) {
            return std::hypot(p.x - c.center_x, p.y - c.center_y) - c.radius;
          },
          [&](const WaypointPath& w) {
            const SegmentHit hit = nearest_on_path(w, p);
            const Point2 a = w[hit.segment], b = w[hit.segment + 1];
            const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
            const double d = std::hypot(p.x - hit.point.x, p.y - hit.point.y);
            return cross < 0.0 ? -d : d;
          }},
      road);
}

Pose sample_measured_pose(const Pose& true_pose, const NoiseModel& noise,
                          const RoadModel& road, NoiseEngine& rng) {
  // Always three draws so the stream position does not depend on which
  // axes are noisy.
  std::normal_distribution<double> unit(0.0, 1.0);
  const double nx = unit(rng);
  const double ny = unit(rng);
  const double nyaw = unit(rng);
  if (noise.cov.is_zero()) return true_pose;

  Point2 p{true_pose.x + std::sqrt(noise.cov.var_x) * nx,
           true_pose.y + std::sqrt(noise.cov.var_y) * ny};
  const double yaw = normalize_angle(true_pose.yaw + std::sqrt(noise.cov.var_yaw) * nyaw);

  const Point2 q = nearest_road_point(road, p);
  const double dev = std::hypot(p.x - q.x, p.y - q.y);
  if (dev > noise.max_lateral_dev) {
    const double s = noise.max_lateral_dev / dev;
    p = {q.x + (p.x - q.x) * s, q.y + (p.y - q.y) * s};
  }
  return {p.x, p.y, yaw};
}

}  // namespace utpp

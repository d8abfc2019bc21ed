#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include "utpp/geometry.hpp"

namespace utpp {

/// Ordered waypoints in the global frame, in travel direction.
/// At least 3 points, consecutive points more than 1e-9 m apart.
class WaypointPath {
 public:
  static constexpr double kMinSpacing = 1e-9;

  /// Throws FaultError(too_few_waypoints) or std::invalid_argument.
  explicit WaypointPath(std::vector<Point2> points);

  std::span<const Point2> points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const Point2& operator[](std::size_t i) const { return points_[i]; }

 private:
  std::vector<Point2> points_;
};

/// Strict reader for `x,y` text files. Blank lines and '#' comments are
/// skipped; anything else that is not two finite numbers is rejected with the
/// line number. Throws ConfigError.
WaypointPath read_waypoint_file(const std::filesystem::path& path);

/// Static 2-d tree over a point set. Queries are exact; ties resolve to the
/// lowest index.
class KdTree {
 public:
  explicit KdTree(std::span<const Point2> points);

  std::size_t nearest(Point2 query) const;
  std::size_t size() const { return points_.size(); }

 private:
  struct Node {
    std::size_t point = 0;
    int axis = 0;
    int left = -1;
    int right = -1;
  };

  int build(std::vector<std::size_t>& ids, std::size_t lo, std::size_t hi, int depth);
  void search(int node, Point2 q, std::size_t& best, double& best_d2) const;

  std::vector<Point2> points_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

/// k-d tree paired with the path it indexes.
class SpatialIndex {
 public:
  explicit SpatialIndex(WaypointPath path);

  const WaypointPath& path() const { return path_; }
  std::size_t nearest(Point2 q) const { return tree_.nearest(q); }

 private:
  WaypointPath path_;
  KdTree tree_;
};

SpatialIndex build_index(const WaypointPath& path);

/// Nearest waypoint to the probe point d_l ahead of the rear axle, clamped to
/// [1, n-2] so that both neighbours exist.
std::size_t select_lookahead_waypoint(const SpatialIndex& index, const Pose& pose,
                                      double lookahead);

/// Signed Menger curvature: positive for counter-clockwise triples.
/// Throws FaultError(coincident_points) if any two points coincide.
double menger_curvature(Point2 a, Point2 b, Point2 c);

/// Circle through three non-collinear points.
Circle circumcircle(Point2 a, Point2 b, Point2 c);

/// Orthogonal least-squares line through the points. Throws
/// FaultError(perpendicular_line) when the fit is steeper than kMaxRoadSlope.
StraightLine fit_line(std::span<const Point2> points);

using LocalRoad = std::variant<Circle, StraightLine>;

inline constexpr double kDefaultStraightEps = 1e-3;  // 1/m

/// Reduces the path near the look-ahead waypoint to a circle (osculating
/// circle of the waypoint and its neighbours) or, when |curvature| is below
/// straight_eps, to a line.
LocalRoad reduce_to_local_road(const SpatialIndex& index, const Pose& pose,
                               double lookahead, double straight_eps = kDefaultStraightEps);

}  // namespace utpp

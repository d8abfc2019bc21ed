#include "utpp/waypoints.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "utpp/error.hpp"

namespace utpp {

WaypointPath::WaypointPath(std::vector<Point2> points) : points_(std::move(points)) {
  if (points_.size() < 3) {
    throw FaultError(Fault::too_few_waypoints,
                     "waypoint path needs at least 3 points, got " +
                         std::to_string(points_.size()));
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i].x) || !std::isfinite(points_[i].y)) {
      throw std::invalid_argument("waypoint " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && std::hypot(points_[i].x - points_[i - 1].x,
                            points_[i].y - points_[i - 1].y) <= kMinSpacing) {
      throw std::invalid_argument("waypoints " + std::to_string(i - 1) + " and " +
                                  std::to_string(i) + " coincide");
    }
  }
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size() && std::isfinite(out);
}

}  // namespace

WaypointPath read_waypoint_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open waypoint file '" + path.string() + "'");

  std::vector<Point2> points;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto comma = body.find(',');
    Point2 p;
    if (comma == std::string_view::npos || !parse_double(body.substr(0, comma), p.x) ||
        !parse_double(body.substr(comma + 1), p.y)) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                        ": expected 'x,y' with two finite numbers");
    }
    points.push_back(p);
  }
  try {
    return WaypointPath(std::move(points));
  } catch (const std::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------

KdTree::KdTree(std::span<const Point2> points) : points_(points.begin(), points.end()) {
  if (points_.empty()) throw std::invalid_argument("k-d tree needs at least one point");
  std::vector<std::size_t> ids(points_.size());
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  nodes_.reserve(points_.size());
  root_ = build(ids, 0, ids.size(), 0);
}

int KdTree::build(std::vector<std::size_t>& ids, std::size_t lo, std::size_t hi,
                  int depth) {
  if (lo >= hi) return -1;
  const int axis = depth % 2;
  const std::size_t mid = lo + (hi - lo) / 2;
  auto coord = [&](std::size_t id) { return axis == 0 ? points_[id].x : points_[id].y; };
  std::nth_element(ids.begin() + lo, ids.begin() + mid, ids.begin() + hi,
                   [&](std::size_t a, std::size_t b) {
                     return coord(a) < coord(b) || (coord(a) == coord(b) && a < b);
                   });
  const int self = static_cast<int>(nodes_.size());
  nodes_.push_back({ids[mid], axis, -1, -1});
  const int left = build(ids, lo, mid, depth + 1);
  const int right = build(ids, mid + 1, hi, depth + 1);
  nodes_[self].left = left;
  nodes_[self].right = right;
  return self;
}

void KdTree::search(int node, Point2 q, std::size_t& best, double& best_d2) const {
  if (node < 0) return;
  const Node& n = nodes_[node];
  const Point2& p = points_[n.point];
  const double dx = q.x - p.x;
  const double dy = q.y - p.y;
  const double d2 = dx * dx + dy * dy;
  if (d2 < best_d2 || (d2 == best_d2 && n.point < best)) {
    best_d2 = d2;
    best = n.point;
  }
  const double diff = n.axis == 0 ? dx : dy;
  const int near = diff < 0.0 ? n.left : n.right;
  const int far = diff < 0.0 ? n.right : n.left;
  search(near, q, best, best_d2);
  // <= keeps equidistant candidates on the far side reachable for the
  // lowest-index tie-break.
  if (diff * diff <= best_d2) search(far, q, best, best_d2);
}

std::size_t KdTree::nearest(Point2 query) const {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  double best_d2 = std::numeric_limits<double>::infinity();
  search(root_, query, best, best_d2);
  return best;
}

SpatialIndex::SpatialIndex(WaypointPath path)
    : path_(std::move(path)), tree_(path_.points()) {}

SpatialIndex build_index(const WaypointPath& path) { return SpatialIndex(path); }

std::size_t select_lookahead_waypoint(const SpatialIndex& index, const Pose& pose,
                                      double lookahead) {
  const std::size_t n = index.path().size();
  if (n < 3) throw FaultError(Fault::too_few_waypoints, "waypoint path too short");
  const Point2 probe{pose.x + lookahead * std::cos(pose.yaw),
                     pose.y + lookahead * std::sin(pose.yaw)};
  return std::clamp<std::size_t>(index.nearest(probe), 1, n - 2);
}

// ---------------------------------------------------------------------------

double menger_curvature(Point2 a, Point2 b, Point2 c) {
  const double ab = std::hypot(b.x - a.x, b.y - a.y);
  const double bc = std::hypot(c.x - b.x, c.y - b.y);
  const double ca = std::hypot(a.x - c.x, a.y - c.y);
  if (ab <= WaypointPath::kMinSpacing || bc <= WaypointPath::kMinSpacing ||
      ca <= WaypointPath::kMinSpacing) {
    throw FaultError(Fault::coincident_points, "Menger curvature needs distinct points");
  }
  const double cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  // 4 * signed area / product of sides, with signed area = cross / 2.
  return 2.0 * cross / (ab * bc * ca);
}

Circle circumcircle(Point2 a, Point2 b, Point2 c) {
  // Work relative to b to keep the determinant well scaled.
  const double ax = a.x - b.x, ay = a.y - b.y;
  const double cx = c.x - b.x, cy = c.y - b.y;
  const double d = 2.0 * (ax * cy - ay * cx);
  if (d == 0.0) {
    throw FaultError(Fault::coincident_points, "circumcircle of collinear points");
  }
  const double a2 = ax * ax + ay * ay;
  const double c2 = cx * cx + cy * cy;
  const double ux = (cy * a2 - ay * c2) / d;
  const double uy = (ax * c2 - cx * a2) / d;
  return {b.x + ux, b.y + uy, std::hypot(ux, uy)};
}

StraightLine fit_line(std::span<const Point2> points) {
  if (points.size() < 2) throw std::invalid_argument("line fit needs two points");
  double mx = 0.0, my = 0.0;
  for (const auto& p : points) {
    mx += p.x;
    my += p.y;
  }
  mx /= static_cast<double>(points.size());
  my /= static_cast<double>(points.size());
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const auto& p : points) {
    sxx += (p.x - mx) * (p.x - mx);
    syy += (p.y - my) * (p.y - my);
    sxy += (p.x - mx) * (p.y - my);
  }
  // Principal axis of the scatter matrix.
  const double theta = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
  const double dir_x = std::cos(theta);
  const double dir_y = std::sin(theta);
  if (std::abs(dir_y) >= kMaxRoadSlope * std::abs(dir_x)) {
    throw FaultError(Fault::perpendicular_line,
                     "local road is too close to vertical for slope-intercept form");
  }
  const double slope = dir_y / dir_x;
  return {slope, my - slope * mx};
}

LocalRoad reduce_to_local_road(const SpatialIndex& index, const Pose& pose,
                               double lookahead, double straight_eps) {
  const std::size_t i = select_lookahead_waypoint(index, pose, lookahead);
  const WaypointPath& path = index.path();
  const Point2 a = path[i - 1], b = path[i], c = path[i + 1];
  const double kappa = menger_curvature(a, b, c);
  if (std::abs(kappa) < straight_eps) {
    const Point2 triple[] = {a, b, c};
    return fit_line(triple);
  }
  return circumcircle(a, b, c);
}

}  // namespace utpp

#include "utpp/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "utpp/detail/overloaded.hpp"

namespace utpp {

using detail::overloaded;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

namespace {

std::string px(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  // "-0.000" and "0.000" must print the same.
  if (std::string_view(buf) == "-0.000") return "0.000";
  return buf;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace

void write_csv(std::span<const TrajectoryRecord> records, std::ostream& out) {
  out << kTrajectoryCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.step << ',' << format_number(r.time) << ',' << format_number(r.true_pose.x) << ','
        << format_number(r.true_pose.y) << ',' << format_number(r.true_pose.yaw) << ','
        << format_number(r.measured_pose.x) << ',' << format_number(r.measured_pose.y) << ','
        << format_number(r.measured_pose.yaw) << ',' << format_number(r.y_e) << ','
        << format_number(r.delta) << ',' << format_number(r.lateral_error) << ','
        << (r.fault ? to_string(*r.fault) : std::string_view{}) << '\n';
  }
}

void emit_csv(std::span<const TrajectoryRecord> records, const std::filesystem::path& path) {
  if (records.empty()) throw std::invalid_argument("no trajectory records to write");
  auto out = open_for_write(path);
  write_csv(records, out);
  finish(out, path);
}

void write_summary_csv(std::span<const RunSummary> runs, std::ostream& out) {
  out << "controller,seed,run_index,convergence_time,mean_abs_lateral_error,max_abs_delta,"
         "fault_count,saturation_count,sigma_fallback_count\n";
  for (const auto& s : runs) {
    out << to_string(s.controller) << ',' << s.seed << ',' << s.run_index << ','
        << (s.convergence_time ? format_number(*s.convergence_time) : std::string{}) << ','
        << format_number(s.mean_abs_lateral_error) << ',' << format_number(s.max_abs_delta)
        << ',' << s.fault_count << ',' << s.saturation_count << ',' << s.sigma_fallback_count
        << '\n';
  }
}

void write_aggregate_csv(std::span<const BatchAggregate> aggregates, std::ostream& out) {
  out << "controller,runs,converged,median_convergence_time,mean_convergence_time,"
         "mean_abs_lateral_error,median_abs_lateral_error,total_faults\n";
  for (const auto& a : aggregates) {
    out << to_string(a.controller) << ',' << a.runs << ',' << a.converged << ','
        << format_number(a.median_convergence_time) << ','
        << format_number(a.mean_convergence_time) << ','
        << format_number(a.mean_abs_lateral_error) << ','
        << format_number(a.median_abs_lateral_error) << ',' << a.total_faults << '\n';
  }
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kWidth = 840.0;
constexpr double kPanelLeft = 70.0;
constexpr double kPanelWidth = 740.0;
constexpr double kTrajTop = 40.0;
constexpr double kTrajHeight = 400.0;
constexpr double kSteerTop = 500.0;
constexpr double kSteerHeight = 200.0;
constexpr double kHeight = 740.0;

struct Bounds {
  double min_x = std::numeric_limits<double>::infinity();
  double max_x = -std::numeric_limits<double>::infinity();
  double min_y = std::numeric_limits<double>::infinity();
  double max_y = -std::numeric_limits<double>::infinity();

  void add(Point2 p) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) return;
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
};

}  // namespace

Viewport trajectory_viewport(std::span<const TrajectoryRecord> records, const RoadModel& road) {
  Bounds b;
  for (const auto& r : records) {
    b.add(r.true_pose.position());
    b.add(r.measured_pose.position());
  }
  std::visit(overloaded{[](const StraightLine&) {},
                        [&](const Circle& c) {
                          b.add({c.center_x - c.radius, c.center_y - c.radius});
                          b.add({c.center_x + c.radius, c.center_y + c.radius});
                        },
                        [&](const WaypointPath& w) {
                          for (const auto& p : w.points()) b.add(p);
                        }},
             road);
  if (!std::isfinite(b.min_x)) b = {0.0, 1.0, 0.0, 1.0};
  // Straight roads pass through the plot; keep them in view.
  if (const auto* l = std::get_if<StraightLine>(&road)) {
    b.add({b.min_x, l->slope * b.min_x + l->intercept});
    b.add({b.max_x, l->slope * b.max_x + l->intercept});
  }
  const double span_x = std::max(b.max_x - b.min_x, 1e-3);
  const double span_y = std::max(b.max_y - b.min_y, 1e-3);
  const double pad = 0.05;
  Viewport v;
  v.data_min_x = b.min_x - pad * span_x;
  v.data_max_y = b.max_y + pad * span_y;
  v.scale = std::min(kPanelWidth / (span_x * (1 + 2 * pad)),
                     kTrajHeight / (span_y * (1 + 2 * pad)));
  v.origin_x = kPanelLeft;
  v.origin_y = kTrajTop;
  return v;
}

void write_svg(std::span<const TrajectoryRecord> records, const RoadModel& road,
               std::ostream& out) {
  const Viewport v = trajectory_viewport(records, road);

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << px(kWidth)
      << "\" height=\"" << px(kHeight) << "\" viewBox=\"0 0 " << px(kWidth) << ' '
      << px(kHeight) << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<defs>\n"
      << "<clipPath id=\"traj\"><rect x=\"" << px(kPanelLeft) << "\" y=\"" << px(kTrajTop)
      << "\" width=\"" << px(kPanelWidth) << "\" height=\"" << px(kTrajHeight)
      << "\"/></clipPath>\n"
      << "</defs>\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Panel 1: paths.
  out << "<text x=\"" << px(kPanelLeft) << "\" y=\"" << px(kTrajTop - 12)
      << "\">path (x, y) [m]</text>\n"
      << "<rect x=\"" << px(kPanelLeft) << "\" y=\"" << px(kTrajTop) << "\" width=\""
      << px(kPanelWidth) << "\" height=\"" << px(kTrajHeight)
      << "\" fill=\"none\" stroke=\"#888\"/>\n"
      << "<g clip-path=\"url(#traj)\">\n";

  std::visit(
      overloaded{
          [&](const StraightLine& l) {
            const double x0 = v.data_min_x;
            const double x1 = v.data_min_x + kPanelWidth / v.scale;
            const Point2 a = v.to_px({x0, l.slope * x0 + l.intercept});
            const Point2 b = v.to_px({x1, l.slope * x1 + l.intercept});
            out << "<line class=\"road\" x1=\"" << px(a.x) << "\" y1=\"" << px(a.y)
                << "\" x2=\"" << px(b.x) << "\" y2=\"" << px(b.y)
                << "\" stroke=\"#2a2\" stroke-width=\"2\"/>\n";
          },
          [&](const Circle& c) {
            const Point2 center = v.to_px(c.center());
            out << "<circle class=\"road\" cx=\"" << px(center.x) << "\" cy=\""
                << px(center.y) << "\" r=\"" << px(c.radius * v.scale)
                << "\" fill=\"none\" stroke=\"#2a2\" stroke-width=\"2\"/>\n";
          },
          [&](const WaypointPath& w) {
            out << "<polyline class=\"road\" fill=\"none\" stroke=\"#2a2\" "
                   "stroke-width=\"2\" points=\"";
            for (std::size_t i = 0; i < w.size(); ++i) {
              const Point2 p = v.to_px(w[i]);
              out << (i ? " " : "") << px(p.x) << ',' << px(p.y);
            }
            out << "\"/>\n";
          }},
      road);

  auto path_line = [&](const char* cls, const char* colour, const char* width, auto pick) {
    out << "<polyline class=\"" << cls << "\" fill=\"none\" stroke=\"" << colour
        << "\" stroke-width=\"" << width << "\" points=\"";
    bool first = true;
    for (const auto& r : records) {
      const Point2 p = v.to_px(pick(r));
      out << (first ? "" : " ") << px(p.x) << ',' << px(p.y);
      first = false;
    }
    out << "\"/>\n";
  };
  path_line("measured", "#69c", "0.8",
            [](const TrajectoryRecord& r) { return r.measured_pose.position(); });
  path_line("true", "#d22", "1.5",
            [](const TrajectoryRecord& r) { return r.true_pose.position(); });
  out << "</g>\n";

  // Panel 2: steering angle over time.
  double t_max = records.empty() ? 1.0 : records.back().time;
  if (!(t_max > 0.0)) t_max = 1.0;
  double d_max = 0.05;
  for (const auto& r : records) d_max = std::max(d_max, std::abs(r.delta));
  d_max *= 1.1;
  auto steer_px = [&](double t, double d) {
    return Point2{kPanelLeft + t / t_max * kPanelWidth,
                  kSteerTop + kSteerHeight * 0.5 * (1.0 - d / d_max)};
  };
  const Point2 z0 = steer_px(0.0, 0.0);
  const Point2 z1 = steer_px(t_max, 0.0);
  out << "<text x=\"" << px(kPanelLeft) << "\" y=\"" << px(kSteerTop - 12)
      << "\">steering angle [rad] over time [s], |max| = " << format_number(d_max / 1.1)
      << "</text>\n"
      << "<rect x=\"" << px(kPanelLeft) << "\" y=\"" << px(kSteerTop) << "\" width=\""
      << px(kPanelWidth) << "\" height=\"" << px(kSteerHeight)
      << "\" fill=\"none\" stroke=\"#888\"/>\n"
      << "<line x1=\"" << px(z0.x) << "\" y1=\"" << px(z0.y) << "\" x2=\"" << px(z1.x)
      << "\" y2=\"" << px(z1.y) << "\" stroke=\"#bbb\"/>\n"
      << "<polyline class=\"delta\" fill=\"none\" stroke=\"#d22\" stroke-width=\"1.2\" "
         "points=\"";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const Point2 p = steer_px(records[i].time, records[i].delta);
    out << (i ? " " : "") << px(p.x) << ',' << px(p.y);
  }
  out << "\"/>\n"
      << "<text x=\"" << px(kPanelLeft + kPanelWidth) << "\" y=\""
      << px(kSteerTop + kSteerHeight + 16) << "\" text-anchor=\"end\">t = "
      << format_number(t_max) << " s</text>\n"
      << "</svg>\n";
}

void emit_svg(std::span<const TrajectoryRecord> records, const RoadModel& road,
              const std::filesystem::path& path) {
  if (records.empty()) throw std::invalid_argument("no trajectory records to plot");
  auto out = open_for_write(path);
  write_svg(records, road, out);
  finish(out, path);
}

}  // namespace utpp

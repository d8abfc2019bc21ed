#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>

#include "utpp/sim.hpp"

namespace utpp {

inline constexpr std::string_view kTrajectoryCsvHeader =
    "step,time,x_true,y_true,psi_true,x_meas,y_meas,psi_meas,y_e,delta,lat_err,fault";

/// %.9g, with NaN/inf spelled nan/inf/-inf regardless of sign bit or libc.
std::string format_number(double v);

void write_csv(std::span<const TrajectoryRecord> records, std::ostream& out);

/// Throws std::runtime_error (with the path) on IO failure and
/// std::invalid_argument for an empty record list.
void emit_csv(std::span<const TrajectoryRecord> records, const std::filesystem::path& path);

void write_summary_csv(std::span<const RunSummary> runs, std::ostream& out);
void write_aggregate_csv(std::span<const BatchAggregate> aggregates, std::ostream& out);

/// Data-to-pixel mapping of the trajectory panel. Equal scale on both axes.
struct Viewport {
  double data_min_x = 0.0;
  double data_max_y = 0.0;
  double scale = 1.0;     // px per meter
  double origin_x = 0.0;  // panel left, px
  double origin_y = 0.0;  // panel top, px

  Point2 to_px(Point2 p) const {
    return {origin_x + (p.x - data_min_x) * scale, origin_y + (data_max_y - p.y) * scale};
  }
};

Viewport trajectory_viewport(std::span<const TrajectoryRecord> records, const RoadModel& road);

/// Two stacked panels: (x, y) paths over the reference road, then steering
/// angle over time. Plain SVG 1.1, no scripts or external references.
void write_svg(std::span<const TrajectoryRecord> records, const RoadModel& road,
               std::ostream& out);
void emit_svg(std::span<const TrajectoryRecord> records, const RoadModel& road,
              const std::filesystem::path& path);

}  // namespace utpp

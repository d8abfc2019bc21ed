#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "utpp/error.hpp"
#include "utpp/geometry.hpp"
#include "utpp/pursuit.hpp"
#include "utpp/uncertainty.hpp"
#include "utpp/vehicle.hpp"
#include "utpp/waypoints.hpp"

namespace utpp {

enum class Controller { pp, utpp };

std::string_view to_string(Controller c) noexcept;

struct Scenario {
  RoadModel road = StraightLine{};
  Pose start_pose;
  double speed = 1.0;  // m/s
  PursuitConfig pursuit;
  double dt = 0.1;     // s
  int steps = 300;
  /// Absent means perfect sensing. UTPP needs it (a zero covariance is fine).
  std::optional<NoiseModel> noise;
  UtParams ut = derive_ut_params(3, 1e-3, 0.0);
  Controller controller = Controller::pp;
  /// When set, the Gaussian draw replaces the true pose after every update
  /// instead of only feeding the controller.
  bool paper_literal = false;
  double straight_eps = kDefaultStraightEps;  // waypoint roads only

  /// Throws ConfigError naming the first offending field.
  void validate() const;
};

/// The road as the controller sees it. Waypoint paths carry a k-d tree and
/// are re-reduced to a circle or line around every query pose.
class RoadTracker {
 public:
  explicit RoadTracker(const RoadModel& road, double straight_eps = kDefaultStraightEps);

  LocalRoad local_road(const Pose& pose, double lookahead) const;

 private:
  RoadModel road_;
  std::optional<SpatialIndex> index_;
  double straight_eps_;
};

/// Road expressed in `frame`, then intersected with the look-ahead circle.
CrossTrack cross_track_at(const LocalRoad& road, const Pose& frame, double lookahead);

struct PpStep {
  double delta = 0.0;
  CrossTrack track;
  bool saturated = false;
};

struct UtppStep {
  double delta = 0.0;
  std::array<double, kSigmaPointCount> deltas{};
  /// Empty where that sigma point faulted and reused the mean point's angle.
  std::array<std::optional<CrossTrack>, kSigmaPointCount> tracks{};
  int fallbacks = 0;
  bool saturated = false;
};

/// Conventional pure pursuit from the measured pose.
/// Throws FaultError if the look-ahead point cannot be found.
PpStep step_pp(const VehicleState& state, const Scenario& scenario,
               const RoadTracker& road);
PpStep step_pp(const VehicleState& state, const Scenario& scenario);

/// Unscented pure pursuit: one pure-pursuit evaluation per sigma point of the
/// measured pose, recombined with the UT weights. The local road is reduced
/// once, around the measured pose. Throws only if the mean point faults.
UtppStep step_utpp(const VehicleState& state, const Scenario& scenario,
                   const RoadTracker& road);
UtppStep step_utpp(const VehicleState& state, const Scenario& scenario);

struct TrajectoryRecord {
  int step = 0;
  double time = 0.0;
  Pose true_pose;
  Pose measured_pose;
  double y_e = 0.0;  // NaN when the step faulted
  double delta = 0.0;
  double lateral_error = 0.0;
  std::optional<Fault> fault;
  bool saturated = false;
  bool tie_break = false;
  int sigma_fallbacks = 0;
};

inline constexpr double kConvergenceThreshold = 0.05;  // m
inline constexpr double kConvergenceHold = 2.0;        // s

struct RunSummary {
  Controller controller = Controller::pp;
  std::optional<double> convergence_time;
  double mean_abs_lateral_error = 0.0;
  double max_abs_delta = 0.0;
  int fault_count = 0;
  int saturation_count = 0;
  int sigma_fallback_count = 0;
  std::uint64_t seed = 0;
  std::uint64_t run_index = 0;
};

/// First time after which |lateral error| stays below the threshold for the
/// hold duration. Empty if that never happens within the records.
std::optional<double> convergence_time(const std::vector<TrajectoryRecord>& records,
                                       double dt, double threshold = kConvergenceThreshold,
                                       double hold = kConvergenceHold);

RunSummary summarize(const std::vector<TrajectoryRecord>& records, const Scenario& scenario,
                     std::uint64_t seed, std::uint64_t run_index);

struct RunResult {
  std::vector<TrajectoryRecord> records;
  RunSummary summary;
};

/// Record k holds the state at t = k dt and the command issued from it.
/// Faults are recorded and the previous command is held; the run never aborts
/// after validation. Throws ConfigError for an invalid scenario.
RunResult run(const Scenario& scenario);
RunResult run(const Scenario& scenario, std::uint64_t seed, std::uint64_t run_index);

struct BatchAggregate {
  Controller controller = Controller::pp;
  int runs = 0;
  int converged = 0;
  /// Non-converged runs count as +inf, so this is inf when fewer than half
  /// the runs converge.
  double median_convergence_time = 0.0;
  /// Over converged runs only; NaN when none converged.
  double mean_convergence_time = 0.0;
  double mean_abs_lateral_error = 0.0;
  double median_abs_lateral_error = 0.0;
  int total_faults = 0;
};

struct BatchResult {
  std::vector<RunSummary> runs;  // ordered by run index
  BatchAggregate aggregate;
};

BatchAggregate aggregate(const std::vector<RunSummary>& runs, Controller controller);

/// Runs `n_runs` seeded copies of the scenario, run i drawing from stream
/// (base_seed, i). `threads` = 0 picks the hardware concurrency. Results do
/// not depend on the thread count.
BatchResult run_batch(const Scenario& scenario, int n_runs, std::uint64_t base_seed,
                      unsigned threads = 0);

}  // namespace utpp

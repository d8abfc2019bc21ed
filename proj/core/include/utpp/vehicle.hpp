#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <variant>

#include "utpp/geometry.hpp"
#include "utpp/uncertainty.hpp"
#include "utpp/waypoints.hpp"

namespace utpp {

/// Reference road in the global frame.
using RoadModel = std::variant<StraightLine, Circle, WaypointPath>;

struct VehicleState {
  Pose true_pose;
  Pose measured_pose;
  double speed = 1.0;      // m/s
  double wheelbase = 1.0;  // m
};

struct NoiseModel {
  Covariance3 cov;               // combined vehicle + road covariance
  double max_lateral_dev = 0.3;  // m
  std::uint64_t rng_seed = 0;
};

/// Generator used for all measurement noise. Recorded in run metadata.
using NoiseEngine = std::mt19937_64;
inline constexpr std::string_view kNoiseEngineName =
    "std::mt19937_64 seeded via std::seed_seq{seed_lo, seed_hi, run_lo, run_hi}; "
    "std::normal_distribution<double>";

/// Independent stream for run `run_index` of a batch seeded with `seed`.
NoiseEngine make_noise_engine(std::uint64_t seed, std::uint64_t run_index);

/// One kinematic bicycle step. The chord is taken at the heading change
/// beta = v T tan(delta) / L in the body frame of the pre-update pose.
Pose advance_pose(const Pose& pose, double delta, double speed, double dt,
                  double wheelbase);

/// Closest point on the road to `p`.
Point2 nearest_road_point(const RoadModel& road, Point2 p);

/// Signed lateral offset of `p` from the road. Lines: positive above the line
/// (left when travelling towards +x). Circles: positive outside. Waypoint
/// paths: positive left of the travel direction.
double lateral_error(const RoadModel& road, Point2 p);

/// Draws a Gaussian pose around `true_pose`, then pulls it back towards the
/// road so its distance to the road is at most max_lateral_dev. Only the
/// position is clamped; yaw is left as drawn.
Pose sample_measured_pose(const Pose& true_pose, const NoiseModel& noise,
                          const RoadModel& road, NoiseEngine& rng);

}  // namespace utpp

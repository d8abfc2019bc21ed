#include "utpp/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "utpp/detail/overloaded.hpp"

namespace utpp {

using detail::overloaded;

std::string_view to_string(Controller c) noexcept {
  return c == Controller::pp ? "pp" : "utpp";
}

void Scenario::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };

  std::visit(overloaded{[&](const StraightLine& l) {
                          if (!std::isfinite(l.slope) || !std::isfinite(l.intercept))
                            fail("road.slope/road.intercept must be finite");
                          if (std::abs(l.slope) >= kMaxRoadSlope)
                            fail("road.slope must satisfy |slope| < tan(89.9 deg)");
                        },
                        [&](const Circle& c) {
                          if (!std::isfinite(c.center_x) || !std::isfinite(c.center_y))
                            fail("road.center_x/road.center_y must be finite");
                          if (!std::isfinite(c.radius) || !(c.radius > 0.0))
                            fail("road.radius must be positive");
                        },
                        [&](const WaypointPath&) {}},
             road);
  if (!is_finite(start_pose)) fail("vehicle start pose must be finite");
  if (!std::isfinite(speed) || !(speed > 0.0)) fail("vehicle.speed must be positive");
  if (!std::isfinite(pursuit.wheelbase) || !(pursuit.wheelbase > 0.0))
    fail("vehicle.wheelbase must be positive");
  if (!std::isfinite(pursuit.lookahead_gain) || !(pursuit.lookahead_gain > 0.0))
    fail("controller.lookahead_gain must be positive");
  if (!(pursuit.steering_limit > 0.0) || !(pursuit.steering_limit < std::numbers::pi / 2))
    fail("controller.steering_limit_deg must be in (0, 90)");
  if (!std::isfinite(dt) || !(dt > 0.0)) fail("sim.dt must be positive");
  if (steps < 1) fail("sim.steps must be >= 1");
  if (!(straight_eps > 0.0)) fail("road.straight_eps must be positive");
  if (noise) {
    if (!noise->cov.is_valid()) fail("noise variances must be finite and >= 0");
    if (!std::isfinite(noise->max_lateral_dev) || !(noise->max_lateral_dev > 0.0))
      fail("noise.max_lateral_dev must be positive");
  }
  if (controller == Controller::utpp && !noise)
    fail("controller utpp needs a [noise] section (a zero covariance is allowed)");
  if (ut.dim != kPoseDim) fail("ut.dim must be 3");
  if (!(std::abs(ut.w0 + 2 * ut.dim * ut.wi - 1.0) <= 1e-9))
    fail("ut weights do not sum to 1");
}

// ---------------------------------------------------------------------------

RoadTracker::RoadTracker(const RoadModel& road, double straight_eps)
    : road_(road), straight_eps_(straight_eps) {
  if (const auto* path = std::get_if<WaypointPath>(&road_)) index_.emplace(*path);
}

LocalRoad RoadTracker::local_road(const Pose& pose, double lookahead) const {
  return std::visit(
      overloaded{[](const StraightLine& l) -> LocalRoad { return l; },
                 [](const Circle& c) -> LocalRoad { return c; },
                 [&](const WaypointPath&) -> LocalRoad {
                   return reduce_to_local_road(*index_, pose, lookahead, straight_eps_);
                 }},
      road_);
}

CrossTrack cross_track_at(const LocalRoad& road, const Pose& frame, double lookahead) {
  return std::visit(overloaded{[&](const StraightLine& l) {
                                 return cross_track_line(line_to_vehicle(l, frame),
                                                         lookahead);
                               },
                               [&](const Circle& c) {
                                 return cross_track_circle(circle_to_vehicle(c, frame),
                                                           lookahead);
                               }},
                    road);
}

PpStep step_pp(const VehicleState& state, const Scenario& scenario,
               const RoadTracker& road) {
  const double lookahead = lookahead_distance(state.speed, scenario.pursuit);
  const LocalRoad local = road.local_road(state.measured_pose, lookahead);
  PpStep out;
  out.track = cross_track_at(local, state.measured_pose, lookahead);
  out.delta = steering_angle(out.track.y_e, lookahead, scenario.pursuit);
  out.saturated = std::abs(out.delta) >= scenario.pursuit.steering_limit;
  return out;
}

PpStep step_pp(const VehicleState& state, const Scenario& scenario) {
  return step_pp(state, scenario, RoadTracker(scenario.road, scenario.straight_eps));
}

UtppStep step_utpp(const VehicleState& state, const Scenario& scenario,
                   const RoadTracker& road) {
  if (!scenario.noise) throw ConfigError("utpp step needs a noise covariance");
  const double lookahead = lookahead_distance(state.speed, scenario.pursuit);
  const LocalRoad local = road.local_road(state.measured_pose, lookahead);
  const SigmaPointSet sigma =
      generate_sigma_points(state.measured_pose, scenario.noise->cov, scenario.ut);

  UtppStep out;
  for (std::size_t i = 0; i < sigma.points.size(); ++i) {
    try {
      out.tracks[i] = cross_track_at(local, sigma.points[i], lookahead);
      out.deltas[i] = steering_angle(out.tracks[i]->y_e, lookahead, scenario.pursuit);
    } catch (const FaultError&) {
      if (i == 0) throw;
      out.tracks[i].reset();
      out.deltas[i] = out.deltas[0];
      ++out.fallbacks;
    }
  }
  const double combined = weighted_combination(out.deltas, scenario.ut);
  out.delta = weighted_steering(out.deltas, scenario.ut, scenario.pursuit.steering_limit);
  out.saturated = std::abs(combined) >= scenario.pursuit.steering_limit;
  return out;
}

UtppStep step_utpp(const VehicleState& state, const Scenario& scenario) {
  return step_utpp(state, scenario, RoadTracker(scenario.road, scenario.straight_eps));
}

// ---------------------------------------------------------------------------

std::optional<double> convergence_time(const std::vector<TrajectoryRecord>& records,
                                       double dt, double threshold, double hold) {
  const auto window = static_cast<std::size_t>(std::ceil(hold / dt - 1e-9));
  std::size_t run_start = 0;
  std::size_t run_length = 0;
  for (std::size_t k = 0; k < records.size(); ++k) {
    if (std::abs(records[k].lateral_error) < threshold) {
      if (run_length == 0) run_start = k;
      ++run_length;
      // window intervals of dt need window + 1 samples.
      if (run_length > window) return records[run_start].time;
    } else {
      run_length = 0;
    }
  }
  return std::nullopt;
}

RunSummary summarize(const std::vector<TrajectoryRecord>& records, const Scenario& scenario,
                     std::uint64_t seed, std::uint64_t run_index) {
  RunSummary s;
  s.controller = scenario.controller;
  s.seed = seed;
  s.run_index = run_index;
  s.convergence_time = convergence_time(records, scenario.dt);
  double sum = 0.0;
  for (const auto& r : records) {
    sum += std::abs(r.lateral_error);
    s.max_abs_delta = std::max(s.max_abs_delta, std::abs(r.delta));
    if (r.fault) ++s.fault_count;
    if (r.saturated) ++s.saturation_count;
    s.sigma_fallback_count += r.sigma_fallbacks;
  }
  s.mean_abs_lateral_error = records.empty() ? 0.0 : sum / static_cast<double>(records.size());
  return s;
}

RunResult run(const Scenario& scenario, std::uint64_t seed, std::uint64_t run_index) {
  scenario.validate();
  const RoadTracker road(scenario.road, scenario.straight_eps);
  NoiseEngine rng = make_noise_engine(seed, run_index);
  const bool noisy = scenario.noise.has_value();

  VehicleState state;
  state.speed = scenario.speed;
  state.wheelbase = scenario.pursuit.wheelbase;
  state.true_pose = scenario.start_pose;
  state.true_pose.yaw = normalize_angle(state.true_pose.yaw);
  state.measured_pose = state.true_pose;
  if (noisy && !scenario.paper_literal) {
    state.measured_pose =
        sample_measured_pose(state.true_pose, *scenario.noise, scenario.road, rng);
  }

  RunResult result;
  result.records.reserve(static_cast<std::size_t>(scenario.steps));
  double last_delta = 0.0;
  for (int k = 0; k < scenario.steps; ++k) {
    TrajectoryRecord rec;
    rec.step = k;
    rec.time = static_cast<double>(k) * scenario.dt;
    rec.true_pose = state.true_pose;
    rec.measured_pose = state.measured_pose;
    rec.lateral_error = lateral_error(scenario.road, state.true_pose.position());
    try {
      if (scenario.controller == Controller::pp) {
        const PpStep step = step_pp(state, scenario, road);
        rec.delta = step.delta;
        rec.y_e = step.track.y_e;
        rec.saturated = step.saturated;
        rec.tie_break = step.track.tie_break;
      } else {
        const UtppStep step = step_utpp(state, scenario, road);
        rec.delta = step.delta;
        rec.y_e = step.tracks[0]->y_e;
        rec.saturated = step.saturated;
        rec.tie_break = step.tracks[0]->tie_break;
        rec.sigma_fallbacks = step.fallbacks;
      }
    } catch (const FaultError& e) {
      rec.fault = e.code();
      rec.delta = last_delta;
      rec.y_e = std::numeric_limits<double>::quiet_NaN();
    }
    last_delta = rec.delta;
    result.records.push_back(rec);

    const Pose next = advance_pose(state.true_pose, rec.delta, state.speed, scenario.dt,
                                   state.wheelbase);
    if (!noisy) {
      state.true_pose = next;
      state.measured_pose = next;
    } else if (scenario.paper_literal) {
      state.true_pose = sample_measured_pose(next, *scenario.noise, scenario.road, rng);
      state.measured_pose = state.true_pose;
    } else {
      state.true_pose = next;
      state.measured_pose = sample_measured_pose(next, *scenario.noise, scenario.road, rng);
    }
  }
  result.summary = summarize(result.records, scenario, seed, run_index);
  return result;
}

RunResult run(const Scenario& scenario) {
  return run(scenario, scenario.noise ? scenario.noise->rng_seed : 0, 0);
}

// ---------------------------------------------------------------------------

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  const double lo = v[n / 2 - 1], hi = v[n / 2];
  if (std::isinf(hi)) return hi;
  return 0.5 * (lo + hi);
}

}  // namespace

BatchAggregate aggregate(const std::vector<RunSummary>& runs, Controller controller) {
  BatchAggregate agg;
  agg.controller = controller;
  agg.runs = static_cast<int>(runs.size());
  std::vector<double> conv, lat;
  double conv_sum = 0.0, lat_sum = 0.0;
  for (const auto& r : runs) {
    if (r.convergence_time) {
      ++agg.converged;
      conv_sum += *r.convergence_time;
      conv.push_back(*r.convergence_time);
    } else {
      conv.push_back(std::numeric_limits<double>::infinity());
    }
    lat.push_back(r.mean_abs_lateral_error);
    lat_sum += r.mean_abs_lateral_error;
    agg.total_faults += r.fault_count;
  }
  agg.median_convergence_time = median(conv);
  agg.mean_convergence_time = agg.converged > 0
                                  ? conv_sum / agg.converged
                                  : std::numeric_limits<double>::quiet_NaN();
  agg.mean_abs_lateral_error = runs.empty() ? 0.0 : lat_sum / static_cast<double>(runs.size());
  agg.median_abs_lateral_error = median(lat);
  return agg;
}

BatchResult run_batch(const Scenario& scenario, int n_runs, std::uint64_t base_seed,
                      unsigned threads) {
  if (n_runs < 1) throw ConfigError("batch size must be >= 1");
  scenario.validate();

  BatchResult out;
  out.runs.resize(static_cast<std::size_t>(n_runs));
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(n_runs));

  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (int i = next++; i < n_runs; i = next++) {
      try {
        out.runs[static_cast<std::size_t>(i)] =
            run(scenario, base_seed, static_cast<std::uint64_t>(i)).summary;
      } catch (...) {
        const std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  out.aggregate = aggregate(out.runs, scenario.controller);
  return out;
}

}  // namespace utpp

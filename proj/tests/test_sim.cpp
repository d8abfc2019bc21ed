#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "utpp/error.hpp"
#include "utpp/sim.hpp"

namespace utpp {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

Scenario reference(RoadModel road) {
  Scenario s;
  s.road = std::move(road);
  s.start_pose = {0.0, 0.5, 0.0};
  s.speed = 1.0;
  s.pursuit.wheelbase = 1.0;
  s.pursuit.lookahead_gain = 1.0;
  s.pursuit.steering_limit = 60 * kDeg;
  s.dt = 0.1;
  s.steps = 300;
  return s;
}

NoiseModel reference_noise(std::uint64_t seed = 1) {
  NoiseModel n;
  n.cov = {0.0, 0.1 * 0.1, std::pow(10 * kDeg, 2)};
  n.max_lateral_dev = 0.3;
  n.rng_seed = seed;
  return n;
}

VehicleState at(const Pose& p) { return {p, p, 1.0, 1.0}; }

TEST(StepPp, Examples) {
  const Scenario line = reference(StraightLine{0, 0});
  EXPECT_NEAR(step_pp(at({0, 0.5, 0}), line).delta, -kPi / 4, 1e-15);
  EXPECT_EQ(step_pp(at({3, 0, 0}), line).delta, 0.0);

  const Scenario circle = reference(Circle{0, 5, 5});
  EXPECT_NEAR(step_pp(at({0, 0, 0}), circle).delta, std::atan(0.2), 1e-15);
}

TEST(StepPp, SaturationFlag) {
  Scenario s = reference(StraightLine{0, 0});
  s.pursuit.steering_limit = 35 * kDeg;
  const auto step = step_pp(at({0, 0.5, 0}), s);
  EXPECT_TRUE(step.saturated);
  EXPECT_NEAR(step.delta, -35 * kDeg, 1e-15);
}

TEST(StepPp, FaultPropagates) {
  const Scenario s = reference(StraightLine{0, 0});
  EXPECT_THROW(step_pp(at({0, 3, 0}), s), FaultError);
}

TEST(StepUtpp, ZeroCovarianceEqualsPp) {
  for (const RoadModel& road : {RoadModel{StraightLine{0.2, -0.1}}, RoadModel{Circle{0, 5, 5}}}) {
    Scenario s = reference(road);
    s.noise = NoiseModel{};
    s.controller = Controller::utpp;
    for (const Pose& p : {Pose{0, 0.5, 0}, Pose{1, 0.1, 0.2}, Pose{-0.5, -0.2, -0.3}}) {
      const auto u = step_utpp(at(p), s);
      EXPECT_EQ(u.delta, step_pp(at(p), s).delta);
      EXPECT_EQ(u.fallbacks, 0);
    }
  }
}

TEST(StepUtpp, SymmetricPoseGivesZero) {
  Scenario s = reference(StraightLine{0, 0});
  s.noise = reference_noise();
  s.controller = Controller::utpp;
  const auto u = step_utpp(at({2, 0, 0}), s);
  EXPECT_NEAR(u.delta, 0.0, 1e-9);
  EXPECT_EQ(u.deltas[0], 0.0);
  EXPECT_NEAR(u.deltas[3], -u.deltas[4], 1e-15);
  EXPECT_NEAR(u.deltas[5], -u.deltas[6], 1e-15);
}

TEST(StepUtpp, SigmaPointFaultReusesMeanAngle) {
  // Large lateral spread pushes the outer sigma points past the look-ahead
  // circle while the mean point still reaches the road.
  Scenario s = reference(StraightLine{0, 0});
  NoiseModel n;
  n.cov = {0.0, 1.0, 0.0};
  s.noise = n;
  s.ut = derive_ut_params(3, 1.0, 0.0);
  s.controller = Controller::utpp;
  const auto u = step_utpp(at({0, 0.5, 0}), s);
  EXPECT_GT(u.fallbacks, 0);
  for (std::size_t i = 0; i < u.tracks.size(); ++i)
    if (!u.tracks[i]) EXPECT_EQ(u.deltas[i], u.deltas[0]);
}

TEST(Run, StepsValidation) {
  Scenario s = reference(StraightLine{0, 0});
  s.steps = 0;
  EXPECT_THROW(run(s), ConfigError);
  s.steps = 1;
  const auto r = run(s);
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].step, 0);
  EXPECT_EQ(r.records[0].time, 0.0);
  EXPECT_NEAR(r.records[0].delta, -kPi / 4, 1e-15);
}

TEST(Run, UtppWithoutNoiseRejected) {
  Scenario s = reference(StraightLine{0, 0});
  s.controller = Controller::utpp;
  try {
    run(s);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("noise"), std::string::npos);
  }
}

TEST(Run, RecordsAreContiguous) {
  Scenario s = reference(StraightLine{0, 0});
  s.noise = reference_noise();
  const auto r = run(s);
  ASSERT_EQ(r.records.size(), 300u);
  for (std::size_t k = 0; k < r.records.size(); ++k) {
    EXPECT_EQ(r.records[k].step, static_cast<int>(k));
    EXPECT_DOUBLE_EQ(r.records[k].time, k * 0.1);
  }
}

TEST(Run, NoiseFreeStraightConverges) {
  const auto r = run(reference(StraightLine{0, 0}));
  EXPECT_NEAR(r.records.front().delta, -kPi / 4, 1e-15);
  bool crossed = false;
  for (const auto& rec : r.records) {
    if (rec.true_pose.y < 0) crossed = true;
    if (rec.time > 15.0) EXPECT_LT(std::abs(rec.true_pose.y), 0.02);
  }
  EXPECT_TRUE(crossed);  // overshoots below the line before settling
  EXPECT_EQ(r.summary.fault_count, 0);
  ASSERT_TRUE(r.summary.convergence_time.has_value());
}

TEST(Run, NoiseFreeCircleSettlesOnFixedPoint) {
  Scenario s = reference(Circle{0, 5, 5});
  const auto r = run(s);
  for (const auto& rec : r.records) {
    if (rec.time <= 15.0) continue;
    EXPECT_LT(std::abs(std::hypot(rec.true_pose.x, rec.true_pose.y - 5) - 5), 0.05);
    EXPECT_NEAR(rec.delta, std::atan(0.2), 0.01);
  }
}

TEST(Run, DeterministicForSeed) {
  Scenario s = reference(StraightLine{0, 0});
  s.noise = reference_noise(7);
  s.controller = Controller::utpp;
  const auto a = run(s), b = run(s);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    ASSERT_EQ(a.records[k].true_pose, b.records[k].true_pose);
    ASSERT_EQ(a.records[k].measured_pose, b.records[k].measured_pose);
    ASSERT_EQ(a.records[k].delta, b.records[k].delta);
  }
  const auto c = run(s, 7, 1);
  EXPECT_NE(a.records[5].measured_pose, c.records[5].measured_pose);
}

TEST(Run, ZeroCovarianceUtppReproducesPp) {
  for (const RoadModel& road : {RoadModel{StraightLine{0, 0}}, RoadModel{Circle{0, 5, 5}}}) {
    Scenario pp = reference(road);
    Scenario ut = pp;
    ut.noise = NoiseModel{};
    ut.controller = Controller::utpp;
    const auto a = run(pp), b = run(ut);
    ASSERT_EQ(a.records.size(), b.records.size());
    for (std::size_t k = 0; k < a.records.size(); ++k) {
      ASSERT_NEAR(a.records[k].true_pose.x, b.records[k].true_pose.x, 1e-12);
      ASSERT_NEAR(a.records[k].true_pose.y, b.records[k].true_pose.y, 1e-12);
      ASSERT_NEAR(a.records[k].true_pose.yaw, b.records[k].true_pose.yaw, 1e-12);
      ASSERT_NEAR(a.records[k].delta, b.records[k].delta, 1e-12);
    }
  }
}

TEST(Run, FaultsHoldPreviousCommandAndAreCounted) {
  // Start far from the line: the first steps cannot reach it.
  Scenario s = reference(StraightLine{0, 0});
  s.start_pose = {0, 1.6, -0.6};
  s.steps = 60;
  const auto r = run(s);
  ASSERT_EQ(r.records.size(), 60u);
  ASSERT_TRUE(r.records[0].fault.has_value());
  EXPECT_EQ(*r.records[0].fault, Fault::path_out_of_reach);
  EXPECT_TRUE(std::isnan(r.records[0].y_e));
  EXPECT_EQ(r.records[0].delta, 0.0);
  int tagged = 0;
  for (std::size_t k = 0; k < r.records.size(); ++k) {
    if (!r.records[k].fault) continue;
    ++tagged;
    if (k > 0) EXPECT_EQ(r.records[k].delta, r.records[k - 1].delta);
  }
  EXPECT_GT(tagged, 0);
  EXPECT_LT(tagged, 60);
  EXPECT_EQ(r.summary.fault_count, tagged);
}

TEST(Run, PaperLiteralKeepsMeasuredEqualTrue) {
  Scenario s = reference(StraightLine{0, 0});
  s.noise = reference_noise(3);
  s.paper_literal = true;
  const auto r = run(s);
  for (const auto& rec : r.records) ASSERT_EQ(rec.true_pose, rec.measured_pose);
  EXPECT_NE(r.records[10].true_pose.yaw, 0.0);
}

TEST(ConvergenceTime, HandBuiltRecords) {
  const double dt = 0.5;
  std::vector<TrajectoryRecord> recs;
  // |e| = 1, 1, 0.01 ... with one excursion at index 4.
  const std::vector<double> errs{1, 1, 0.01, 0.01, 0.2, 0.01, 0.01, 0.01, 0.01, 0.01, 0.01};
  for (std::size_t k = 0; k < errs.size(); ++k) {
    TrajectoryRecord r;
    r.step = static_cast<int>(k);
    r.time = k * dt;
    r.lateral_error = errs[k];
    recs.push_back(r);
  }
  // 2 s at dt = 0.5 means five consecutive samples below threshold.
  const auto t = convergence_time(recs, dt);
  ASSERT_TRUE(t.has_value());
  EXPECT_DOUBLE_EQ(*t, 2.5);

  recs.resize(9);  // only four samples after the excursion
  EXPECT_FALSE(convergence_time(recs, dt).has_value());
}

TEST(Aggregate, MedianCountsNonConvergedAsInfinite) {
  std::vector<RunSummary> runs(3);
  runs[0].convergence_time = 1.0;
  runs[1].convergence_time = 3.0;
  auto agg = aggregate(runs, Controller::pp);
  EXPECT_EQ(agg.converged, 2);
  EXPECT_DOUBLE_EQ(agg.median_convergence_time, 3.0);
  EXPECT_DOUBLE_EQ(agg.mean_convergence_time, 2.0);
  runs[1].convergence_time.reset();
  agg = aggregate(runs, Controller::pp);
  EXPECT_TRUE(std::isinf(agg.median_convergence_time));
}

TEST(RunBatch, SingleRunMatchesRun) {
  Scenario s = reference(StraightLine{0, 0});
  s.noise = reference_noise(11);
  s.controller = Controller::utpp;
  const auto batch = run_batch(s, 1, 11, 1);
  const auto single = run(s, 11, 0);
  ASSERT_EQ(batch.runs.size(), 1u);
  EXPECT_EQ(batch.runs[0].convergence_time, single.summary.convergence_time);
  EXPECT_EQ(batch.runs[0].mean_abs_lateral_error, single.summary.mean_abs_lateral_error);
  EXPECT_EQ(batch.runs[0].max_abs_delta, single.summary.max_abs_delta);
}

TEST(RunBatch, IndependentOfThreadCount) {
  Scenario s = reference(Circle{0, 5, 5});
  s.noise = reference_noise();
  s.steps = 120;
  const auto a = run_batch(s, 16, 5, 1);
  const auto b = run_batch(s, 16, 5, 4);
  const auto c = run_batch(s, 16, 5, 4);
  ASSERT_EQ(a.runs.size(), 16u);
  for (std::size_t i = 0; i < a.runs.size(); ++i) {
    EXPECT_EQ(a.runs[i].run_index, i);
    EXPECT_EQ(a.runs[i].mean_abs_lateral_error, b.runs[i].mean_abs_lateral_error);
    EXPECT_EQ(a.runs[i].convergence_time, b.runs[i].convergence_time);
  }
  EXPECT_EQ(a.aggregate.mean_abs_lateral_error, b.aggregate.mean_abs_lateral_error);
  EXPECT_EQ(b.aggregate.median_abs_lateral_error, c.aggregate.median_abs_lateral_error);
  EXPECT_EQ(a.aggregate.median_convergence_time, b.aggregate.median_convergence_time);
}

TEST(RunBatch, RejectsNonPositiveCount) {
  Scenario s = reference(StraightLine{0, 0});
  EXPECT_THROW(run_batch(s, 0, 1), ConfigError);
}

// Regression lock on the noisy UTPP steering sequence. Set UTPP_REGEN_GOLDEN=1
// to rewrite the file after an intentional change.
TEST(Golden, StraightUtppSeed7) {
  Scenario s = reference(StraightLine{0, 0});
  s.noise = reference_noise(7);
  s.controller = Controller::utpp;
  s.steps = 100;
  const auto r = run(s);
  const std::string path = std::string(UTPP_TEST_DATA_DIR) + "/utpp_straight_seed7.txt";

  if (std::getenv("UTPP_REGEN_GOLDEN")) {
    std::ofstream out(path);
    char buf[64];
    for (const auto& rec : r.records) {
      std::snprintf(buf, sizeof buf, "%.17g\n", rec.delta);
      out << buf;
    }
    GTEST_SKIP() << "rewrote " << path;
  }

  std::ifstream in(path);
  ASSERT_TRUE(in) << "missing " << path;
  std::vector<double> expected;
  for (std::string line; std::getline(in, line);) expected.push_back(std::stod(line));
  ASSERT_EQ(expected.size(), r.records.size());
  for (std::size_t k = 0; k < expected.size(); ++k)
    ASSERT_NEAR(r.records[k].delta, expected[k], 1e-12) << "step " << k;
}

}  // namespace
}  // namespace utpp

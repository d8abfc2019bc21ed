#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "utpp/sim.hpp"
#include "utpp/waypoints.hpp"

namespace {

using namespace utpp;

constexpr double kPi = std::numbers::pi;

Scenario straight(Controller c) {
  Scenario s;
  s.road = StraightLine{0, 0};
  s.start_pose = {0, 0.5, 0};
  s.pursuit.steering_limit = kPi / 3;
  NoiseModel n;
  n.cov = {0.0, 0.01, std::pow(10 * kPi / 180, 2)};
  n.rng_seed = 1;
  s.noise = n;
  s.controller = c;
  return s;
}

WaypointPath circle_path(int n) {
  std::vector<Point2> pts;
  for (int i = 0; i < n; ++i) {
    const double t = -kPi / 2 + 2 * kPi * i / n;
    pts.push_back({5 * std::cos(t), 5 + 5 * std::sin(t)});
  }
  return WaypointPath(pts);
}

void BM_StepPp(benchmark::State& state) {
  const Scenario s = straight(Controller::pp);
  const VehicleState v{{0, 0.3, 0.1}, {0, 0.3, 0.1}, 1.0, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(step_pp(v, s).delta);
}
BENCHMARK(BM_StepPp);

void BM_StepUtpp(benchmark::State& state) {
  const Scenario s = straight(Controller::utpp);
  const VehicleState v{{0, 0.3, 0.1}, {0, 0.3, 0.1}, 1.0, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(step_utpp(v, s).delta);
}
BENCHMARK(BM_StepUtpp);

void BM_KdTreeNearest(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-100, 100);
  std::vector<Point2> pts(n);
  for (auto& p : pts) p = {u(rng), u(rng)};
  const KdTree tree(pts);
  std::vector<Point2> queries(1024);
  for (auto& q : queries) q = {u(rng), u(rng)};
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(tree.nearest(queries[i++ & 1023]));
}
BENCHMARK(BM_KdTreeNearest)->Arg(1 << 10)->Arg(1 << 16);

void BM_ReduceToLocalRoad(benchmark::State& state) {
  const SpatialIndex index(circle_path(720));
  const Pose pose{0, 0, 0};
  for (auto _ : state) benchmark::DoNotOptimize(reduce_to_local_road(index, pose, 1.0));
}
BENCHMARK(BM_ReduceToLocalRoad);

void BM_Run(benchmark::State& state) {
  const Scenario s = straight(state.range(0) ? Controller::utpp : Controller::pp);
  for (auto _ : state) benchmark::DoNotOptimize(run(s).summary.mean_abs_lateral_error);
}
BENCHMARK(BM_Run)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_RunWaypoints(benchmark::State& state) {
  Scenario s = straight(Controller::utpp);
  s.road = circle_path(720);
  for (auto _ : state) benchmark::DoNotOptimize(run(s).summary.mean_abs_lateral_error);
}
BENCHMARK(BM_RunWaypoints)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();

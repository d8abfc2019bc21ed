#include <gtest/gtest.h>

#include <numbers>

#include "oracles.hpp"
#include "utpp/error.hpp"
#include "utpp/geometry.hpp"

namespace utpp {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(NormalizeAngle, WrapsIntoHalfOpenInterval) {
  EXPECT_DOUBLE_EQ(normalize_angle(0.0), 0.0);
  EXPECT_DOUBLE_EQ(normalize_angle(kPi), kPi);
  EXPECT_DOUBLE_EQ(normalize_angle(-kPi), kPi);
  EXPECT_NEAR(normalize_angle(3 * kPi), kPi, 1e-12);
  EXPECT_NEAR(normalize_angle(2 * kPi + 0.25), 0.25, 1e-12);
  EXPECT_NEAR(normalize_angle(-2 * kPi - 0.25), -0.25, 1e-12);

  oracle::Gen g(11);
  for (int i = 0; i < 1000; ++i) {
    const double a = normalize_angle(g.uniform(-50.0, 50.0));
    EXPECT_GT(a, -kPi);
    EXPECT_LE(a, kPi);
  }
}

TEST(VehicleToGlobal, Examples) {
  auto p = vehicle_to_global({1, 0}, {0, 0, 0});
  EXPECT_DOUBLE_EQ(p.x, 1.0);
  EXPECT_DOUBLE_EQ(p.y, 0.0);

  p = vehicle_to_global({1, 0}, {0, 0, kPi / 2});
  EXPECT_NEAR(p.x, 0.0, 1e-15);
  EXPECT_NEAR(p.y, 1.0, 1e-15);

  // (3 - 1, -1 + 2)
  p = vehicle_to_global({2, 1}, {3, -1, kPi / 2});
  EXPECT_NEAR(p.x, 2.0, 1e-15);
  EXPECT_NEAR(p.y, 1.0, 1e-15);
}

TEST(GlobalToVehicle, Examples) {
  auto p = global_to_vehicle({1, 0}, {0, 0, 0});
  EXPECT_DOUBLE_EQ(p.x, 1.0);
  EXPECT_DOUBLE_EQ(p.y, 0.0);

  p = global_to_vehicle({0, 1}, {0, 0, kPi / 2});
  EXPECT_NEAR(p.x, 1.0, 1e-15);
  EXPECT_NEAR(p.y, 0.0, 1e-15);
}

TEST(GlobalToVehicle, RoundTripProperty) {
  oracle::Gen g(1);
  for (int i = 0; i < 1000; ++i) {
    const Point2 p{g.uniform(-100, 100), g.uniform(-100, 100)};
    const Pose f{g.uniform(-100, 100), g.uniform(-100, 100), g.angle()};
    const Point2 back = global_to_vehicle(vehicle_to_global(p, f), f);
    ASSERT_NEAR(back.x, p.x, 1e-12);
    ASSERT_NEAR(back.y, p.y, 1e-12);
  }
}

TEST(LineToVehicle, Examples) {
  auto l = line_to_vehicle({0, 0}, {0, 0.5, 0});
  EXPECT_DOUBLE_EQ(l.slope, 0.0);
  EXPECT_DOUBLE_EQ(l.intercept, -0.5);

  l = line_to_vehicle({1, 0}, {0, 0, kPi / 4});
  EXPECT_NEAR(l.slope, 0.0, 1e-15);
  EXPECT_NEAR(l.intercept, 0.0, 1e-15);
}

TEST(LineToVehicle, PerpendicularLineFaults) {
  try {
    line_to_vehicle({0, 0}, {0, 0, kPi / 2});
    FAIL() << "expected a fault";
  } catch (const FaultError& e) {
    EXPECT_EQ(e.code(), Fault::perpendicular_line);
  }
  EXPECT_THROW(line_to_vehicle({0, 3}, {1, 2, -kPi / 2}), FaultError);
}

TEST(LineToVehicle, SampledPointsSatisfyVehicleFrameEquation) {
  oracle::Gen g(2);
  int checked = 0;
  while (checked < 1000) {
    const StraightLine line{g.uniform(-5, 5), g.uniform(-20, 20)};
    const Pose f{g.uniform(-20, 20), g.uniform(-20, 20), g.angle()};
    if (std::abs(std::cos(std::atan(line.slope) - f.yaw)) < 0.05) continue;
    const StraightLine v = line_to_vehicle(line, f);
    for (int k = 0; k < 10; ++k) {
      const double x = g.uniform(-20, 20);
      const Point2 pv = global_to_vehicle({x, line.slope * x + line.intercept}, f);
      ASSERT_NEAR(pv.y, v.slope * pv.x + v.intercept, 1e-9);
    }
    ++checked;
  }
}

TEST(CircleToVehicle, Examples) {
  auto c = circle_to_vehicle({0, 5, 5}, {0, 0.5, 0});
  EXPECT_DOUBLE_EQ(c.center_x, 0.0);
  EXPECT_DOUBLE_EQ(c.center_y, 4.5);
  EXPECT_DOUBLE_EQ(c.radius, 5.0);

  c = circle_to_vehicle({0, 5, 5}, {0, 0, kPi / 2});
  EXPECT_NEAR(c.center_x, 5.0, 1e-14);
  EXPECT_NEAR(c.center_y, 0.0, 1e-14);
  EXPECT_DOUBLE_EQ(c.radius, 5.0);
}

TEST(CircleToVehicle, PointsStayOnTransformedCircle) {
  oracle::Gen g(3);
  for (int i = 0; i < 1000; ++i) {
    const Circle c{g.uniform(-10, 10), g.uniform(-10, 10), g.uniform(0.1, 10)};
    const Pose f{g.uniform(-10, 10), g.uniform(-10, 10), g.angle()};
    const Circle v = circle_to_vehicle(c, f);
    ASSERT_EQ(v.radius, c.radius);
    const double t = g.angle();
    const Point2 pv = global_to_vehicle(
        {c.center_x + c.radius * std::cos(t), c.center_y + c.radius * std::sin(t)}, f);
    ASSERT_NEAR(std::hypot(pv.x - v.center_x, pv.y - v.center_y), c.radius, 1e-12);
  }
}

}  // namespace
}  // namespace utpp

#include "utpp/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "utpp/error.hpp"

namespace utpp {

bool Covariance3::is_valid() const {
  auto ok = [](double v) { return std::isfinite(v) && v >= 0.0; };
  return ok(var_x) && ok(var_y) && ok(var_yaw);
}

Covariance3 compose_covariance(const Covariance3& vehicle, const Covariance3& road) {
  return {vehicle.var_x + road.var_x, vehicle.var_y + road.var_y,
          vehicle.var_yaw + road.var_yaw};
}

UtParams derive_ut_params(int dim, double alpha, double kappa) {
  if (dim < 1) {
    throw std::invalid_argument("unscented dimension must be >= 1, got " +
                                std::to_string(dim));
  }
  UtParams p;
  p.dim = dim;
  p.alpha = alpha;
  p.kappa = kappa;
  const double scale = alpha * alpha * (dim + kappa);
  p.lambda = scale - dim;
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw FaultError(Fault::degenerate_scaling,
                     "dim + lambda must be positive (alpha^2 (dim + kappa) = " +
                         std::to_string(scale) + ")");
  }
  // dim + lambda is evaluated as `scale` directly; re-adding dim to lambda
  // would round away most of alpha^2 when alpha is small.
  p.w0 = p.lambda / scale;
  p.wi = 1.0 / (2.0 * scale);
  return p;
}

SigmaPointSet generate_sigma_points(const Pose& mean, const Covariance3& cov,
                                    const UtParams& params) {
  if (params.dim != kPoseDim) {
    throw std::invalid_argument("sigma points are defined for pose dimension 3");
  }
  const double scale = params.alpha * params.alpha * (params.dim + params.kappa);
  if (!(scale > 0.0)) {
    throw FaultError(Fault::degenerate_scaling, "dim + lambda must be positive");
  }
  const double spread = std::sqrt(scale);
  const double dx = spread * std::sqrt(cov.var_x);
  const double dy = spread * std::sqrt(cov.var_y);
  const double dyaw = spread * std::sqrt(cov.var_yaw);

  SigmaPointSet set;
  set.points[0] = mean;
  set.points[1] = {mean.x + dx, mean.y, mean.yaw};
  set.points[2] = {mean.x - dx, mean.y, mean.yaw};
  set.points[3] = {mean.x, mean.y + dy, mean.yaw};
  set.points[4] = {mean.x, mean.y - dy, mean.yaw};
  set.points[5] = {mean.x, mean.y, normalize_angle(mean.yaw + dyaw)};
  set.points[6] = {mean.x, mean.y, normalize_angle(mean.yaw - dyaw)};
  return set;
}

double weighted_combination(std::span<const double> deltas, const UtParams& params) {
  if (static_cast<int>(deltas.size()) != params.point_count()) {
    throw std::invalid_argument("expected " + std::to_string(params.point_count()) +
                                " steering angles, got " +
                                std::to_string(deltas.size()));
  }
  const double d0 = deltas[0];
  double offset_sum = 0.0;
  for (std::size_t i = 1; i < deltas.size(); ++i) offset_sum += deltas[i] - d0;
  return d0 + params.wi * offset_sum;
}

double weighted_steering(std::span<const double> deltas, const UtParams& params,
                         double steering_limit) {
  return std::clamp(weighted_combination(deltas, params), -steering_limit,
                    steering_limit);
}

Pose weighted_mean(const SigmaPointSet& set, const UtParams& params) {
  const Pose& p0 = set.points[0];
  double sx = 0.0, sy = 0.0, syaw = 0.0;
  for (std::size_t i = 1; i < set.points.size(); ++i) {
    sx += set.points[i].x - p0.x;
    sy += set.points[i].y - p0.y;
    syaw += normalize_angle(set.points[i].yaw - p0.yaw);
  }
  return {p0.x + params.wi * sx, p0.y + params.wi * sy,
          normalize_angle(p0.yaw + params.wi * syaw)};
}

}  // namespace utpp

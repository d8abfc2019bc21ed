#pragma once

#include <array>
#include <span>

#include "utpp/geometry.hpp"

namespace utpp {

/// Diagonal covariance over (x, y, yaw), stored as variances.
struct Covariance3 {
  double var_x = 0.0;    // m^2
  double var_y = 0.0;    // m^2
  double var_yaw = 0.0;  // rad^2

  bool is_zero() const { return var_x == 0.0 && var_y == 0.0 && var_yaw == 0.0; }
  bool is_valid() const;
};

/// Vehicle and road uncertainty are independent, so they add.
Covariance3 compose_covariance(const Covariance3& vehicle, const Covariance3& road);

/// Scaled unscented-transform constants. Only the mean weights are needed:
/// the controller recombines steering angles, it never rebuilds a covariance.
struct UtParams {
  int dim = 3;
  double alpha = 1e-3;
  double kappa = 0.0;
  double lambda = 0.0;
  double w0 = 0.0;
  double wi = 0.0;

  int point_count() const { return 2 * dim + 1; }
};

/// lambda = alpha^2 (dim + kappa) - dim, w0 = lambda / (dim + lambda),
/// wi = 1 / (2 (dim + lambda)).
/// Throws FaultError(degenerate_scaling) when dim + lambda <= 0.
UtParams derive_ut_params(int dim, double alpha, double kappa);

inline constexpr int kPoseDim = 3;
inline constexpr int kSigmaPointCount = 2 * kPoseDim + 1;

/// Index 0 is the mean. Pairs (1,2), (3,4), (5,6) are +/- offsets along x, y
/// and yaw respectively.
struct SigmaPointSet {
  std::array<Pose, kSigmaPointCount> points{};
};

SigmaPointSet generate_sigma_points(const Pose& mean, const Covariance3& cov,
                                    const UtParams& params);

/// Weighted recombination of per-sigma-point steering angles, clamped to
/// +/- steering_limit.
///
/// Evaluated as d0 + wi * sum(di - d0), which equals w0*d0 + wi*sum(di)
/// whenever w0 + 2*dim*wi = 1. With alpha = 1e-3 the weights are ~1e6 in
/// magnitude and the literal form loses about ten digits to cancellation;
/// the offset form is exact when all angles agree.
double weighted_steering(std::span<const double> deltas, const UtParams& params,
                         double steering_limit);

/// Unclamped version, for callers that want to see saturation themselves.
double weighted_combination(std::span<const double> deltas, const UtParams& params);

/// UT mean of a sigma-point set. Yaw offsets are wrapped before averaging.
Pose weighted_mean(const SigmaPointSet& set, const UtParams& params);

}  // namespace utpp

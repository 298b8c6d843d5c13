#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "gpstop/series.hpp"

namespace gpstop {

/// Ornstein-Uhlenbeck process parameters; paths live on the grid
/// {dt, 2 dt, ..., horizon * dt}.
struct OUParams {
  double theta = 0.5;  // mean-reversion rate, > 0
  double mu = 1.0;     // long-run level
  double sigma = 0.2;  // diffusion scale, > 0
  double x0 = 1.0;     // deterministic value at time 0
  int horizon = 100;   // number of grid points, >= 2
  double dt = 1.0;     // grid spacing, > 0
};

void validate(const OUParams& params);

/// E[x_t] = x0 e^{-theta t} + mu (1 - e^{-theta t}).
double ou_mean(double t, const OUParams& params);

/// Cov[x_s, x_t] = sigma^2 / (2 theta) (e^{-theta |t-s|} - e^{-theta (t+s)}).
double ou_cov(double s, double t, const OUParams& params);

Eigen::VectorXd ou_grid_times(const OUParams& params);
Eigen::VectorXd ou_mean_curve(const OUParams& params);
Eigen::MatrixXd ou_covariance_matrix(const OUParams& params);

/// Exact joint-Gaussian draws via the Cholesky factor of the grid
/// covariance. Deterministic given seed; series ids are "ou_<i>".
std::vector<PriceSeries> sample_ou_paths(const OUParams& params, int count, std::uint64_t seed);

}  // namespace gpstop

#include "gpstop/ou.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "gpstop/linalg.hpp"
#include "gpstop/rng.hpp"

namespace gpstop {

void validate(const OUParams& params) {
  if (!(params.theta > 0.0)) throw std::domain_error("OU theta must be positive");
  if (!(params.sigma > 0.0)) throw std::domain_error("OU sigma must be positive");
  if (params.horizon < 2) throw std::invalid_argument("OU horizon must be at least 2");
  if (!(params.dt > 0.0)) throw std::domain_error("OU dt must be positive");
}

double ou_mean(double t, const OUParams& params) {
  if (t < 0.0) throw std::invalid_argument("OU mean requires t >= 0");
  const double decay = std::exp(-params.theta * t);
  return params.x0 * decay + params.mu * (1.0 - decay);
}

double ou_cov(double s, double t, const OUParams& params) {
  if (s < 0.0 || t < 0.0) throw std::invalid_argument("OU covariance requires s, t >= 0");
  const double scale = params.sigma * params.sigma / (2.0 * params.theta);
  return scale * (std::exp(-params.theta * std::abs(t - s)) - std::exp(-params.theta * (t + s)));
}

Eigen::VectorXd ou_grid_times(const OUParams& params) {
  Eigen::VectorXd times(params.horizon);
  for (int i = 0; i < params.horizon; ++i) times[i] = (i + 1) * params.dt;
  return times;
}

Eigen::VectorXd ou_mean_curve(const OUParams& params) {
  const Eigen::VectorXd times = ou_grid_times(params);
  Eigen::VectorXd mean(times.size());
  for (Eigen::Index i = 0; i < times.size(); ++i) mean[i] = ou_mean(times[i], params);
  return mean;
}

Eigen::MatrixXd ou_covariance_matrix(const OUParams& params) {
  const Eigen::VectorXd times = ou_grid_times(params);
  const Eigen::Index n = times.size();
  Eigen::MatrixXd cov(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      const double c = ou_cov(times[i], times[j], params);
      cov(i, j) = c;
      cov(j, i) = c;
    }
  }
  return cov;
}

std::vector<PriceSeries> sample_ou_paths(const OUParams& params, int count, std::uint64_t seed) {
  validate(params);
  if (count < 1) throw std::invalid_argument("sample_ou_paths requires count >= 1");

  const Eigen::VectorXd mean = ou_mean_curve(params);
  const Eigen::MatrixXd chol = jittered_cholesky(ou_covariance_matrix(params));

  Rng rng(seed);
  std::vector<PriceSeries> paths;
  paths.reserve(static_cast<std::size_t>(count));
  Eigen::VectorXd z(params.horizon);
  for (int i = 0; i < count; ++i) {
    for (int t = 0; t < params.horizon; ++t) z[t] = rng.normal();
    PriceSeries series;
    series.id = "ou_" + std::to_string(i);
    series.asset = "ou";
    series.values = mean + chol.triangularView<Eigen::Lower>() * z;
    paths.push_back(std::move(series));
  }
  return paths;
}

}  // namespace gpstop

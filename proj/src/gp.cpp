#include "gpstop/gp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gpstop/errors.hpp"
#include "gpstop/linalg.hpp"

namespace gpstop {

GPModel::GPModel(KernelSpec kernel, double noise_variance, Eigen::VectorXd train_times,
                 Eigen::VectorXd train_values)
    : kernel_(kernel), noise_variance_(std::max(noise_variance, kNoiseFloor)) {
  validate(kernel_);
  if (noise_variance < 0.0) {
    throw std::domain_error("noise variance must be non-negative");
  }
  if (train_times.size() != train_values.size()) {
    throw std::invalid_argument("training times and values differ in length");
  }
  if (!train_times.allFinite() || !train_values.allFinite()) {
    throw std::invalid_argument("training data must be finite");
  }

  const Eigen::Index n = train_times.size();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index b) { return train_times[a] < train_times[b]; });
  train_times_.resize(n);
  train_values_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    train_times_[i] = train_times[order[i]];
    train_values_[i] = train_values[order[i]];
  }
  for (Eigen::Index i = 1; i < n; ++i) {
    if (train_times_[i] == train_times_[i - 1]) {
      throw std::invalid_argument("duplicate training time index");
    }
  }

  if (n == 0) return;
  Eigen::MatrixXd gram = kernel_matrix(kernel_, train_times_, train_times_);
  gram.diagonal().array() += noise_variance_;
  chol_ = jittered_cholesky(gram, &applied_jitter_);
  alpha_ = chol_.triangularView<Eigen::Lower>().solve(train_values_);
  chol_.transpose().triangularView<Eigen::Upper>().solveInPlace(alpha_);
}

double GPModel::log_marginal_likelihood() const {
  const Eigen::Index n = size();
  if (n == 0) return 0.0;
  const double quad = train_values_.dot(alpha_);
  const double log_det = chol_.diagonal().array().log().sum();
  return -0.5 * quad - log_det - 0.5 * static_cast<double>(n) * std::log(2.0 * M_PI);
}

PredictiveMarginal GPModel::posterior_marginal(double time) const {
  const double prior_var = kernel_eval(kernel_, time, time);
  if (size() == 0) {
    return {time, 0.0, prior_var + noise_variance_};
  }
  const Eigen::VectorXd k_star = kernel_vector(kernel_, train_times_, time);
  const double mean = k_star.dot(alpha_);
  const Eigen::VectorXd v = chol_.triangularView<Eigen::Lower>().solve(k_star);
  const double latent = std::max(prior_var - v.squaredNorm(), 0.0);
  return {time, mean, latent + noise_variance_};
}

std::vector<PredictiveMarginal> GPModel::posterior_marginals(
    const Eigen::Ref<const Eigen::VectorXd>& times) const {
  std::vector<PredictiveMarginal> out;
  out.reserve(static_cast<std::size_t>(times.size()));
  for (Eigen::Index i = 0; i < times.size(); ++i) {
    out.push_back(posterior_marginal(times[i]));
  }
  return out;
}

}  // namespace gpstop

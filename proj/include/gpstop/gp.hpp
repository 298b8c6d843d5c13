#pragma once

#include <Eigen/Core>
#include <vector>

#include "gpstop/kernel.hpp"

namespace gpstop {

/// Predictive Normal for the observed price at one time index. The variance
/// includes observation noise, so it is the distribution of the next price
/// rather than of the latent function value.
struct PredictiveMarginal {
  double time = 0.0;
  double mean = 0.0;
  double variance = 0.0;
};

/// Exact GP regression on 1-D time indices, immutable after construction.
///
/// Construction sorts (times, values) jointly by time, rejects duplicate
/// times, floors the noise variance at kNoiseFloor and caches the Cholesky
/// factor of K + sigma_n^2 I together with its solve against the targets.
/// An empty conditioning set is allowed and yields the prior.
class GPModel {
 public:
  static constexpr double kNoiseFloor = 1e-8;

  GPModel(KernelSpec kernel, double noise_variance, Eigen::VectorXd train_times,
          Eigen::VectorXd train_values);

  const KernelSpec& kernel() const { return kernel_; }
  double noise_variance() const { return noise_variance_; }
  const Eigen::VectorXd& train_times() const { return train_times_; }
  const Eigen::VectorXd& train_values() const { return train_values_; }
  /// Lower factor L with L L^T = K + sigma_n^2 I (+ jitter when needed).
  const Eigen::MatrixXd& chol() const { return chol_; }
  /// Cached solve (K + sigma_n^2 I)^{-1} y.
  const Eigen::VectorXd& alpha() const { return alpha_; }
  double applied_jitter() const { return applied_jitter_; }
  Eigen::Index size() const { return train_times_.size(); }

  double log_marginal_likelihood() const;
  PredictiveMarginal posterior_marginal(double time) const;
  /// Elementwise equal to posterior_marginal; reuses the cached factor.
  std::vector<PredictiveMarginal> posterior_marginals(
      const Eigen::Ref<const Eigen::VectorXd>& times) const;

 private:
  KernelSpec kernel_;
  double noise_variance_;
  Eigen::VectorXd train_times_;
  Eigen::VectorXd train_values_;
  Eigen::MatrixXd chol_;
  Eigen::VectorXd alpha_;
  double applied_jitter_ = 0.0;
};

}  // namespace gpstop

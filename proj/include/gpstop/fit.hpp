#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "gpstop/gp.hpp"

namespace gpstop {

/// Settings for marginal-likelihood maximization. Starts are sampled
/// log-uniformly within a factor of 1e2 around data-scale heuristics; the
/// search itself is a derivative-free simplex run per start, all in
/// log-parameter space. Deterministic given `seed`.
struct FitConfig {
  int num_starts = 8;
  int max_iterations = 200;
  double tolerance = 1e-7;  // relative simplex spread at which a start stops
  std::uint64_t seed = 0;
};

/// Fits (lengthscale, signal variance, noise variance and, where the family
/// has one, the shape parameter) by maximizing the log marginal likelihood.
/// Requires at least 3 finite training points. Throws NumericError when no
/// start produces a finite objective.
GPModel fit_hyperparams(const Eigen::Ref<const Eigen::VectorXd>& times,
                        const Eigen::Ref<const Eigen::VectorXd>& values, KernelFamily family,
                        const FitConfig& config = {});

}  // namespace gpstop

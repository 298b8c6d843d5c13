#include "gpstop/fit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "gpstop/errors.hpp"
#include "gpstop/rng.hpp"

namespace gpstop {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SimplexResult {
  Eigen::VectorXd x;
  double fx = kInf;
};

/// Nelder-Mead with standard coefficients. Returns the best vertex seen;
/// never worse than f(x0).
SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                          const Eigen::VectorXd& x0, int max_iterations, double tolerance) {
  const Eigen::Index dim = x0.size();
  const double step = 0.4;

  std::vector<SimplexResult> simplex(static_cast<std::size_t>(dim) + 1);
  simplex[0] = {x0, f(x0)};
  for (Eigen::Index i = 0; i < dim; ++i) {
    Eigen::VectorXd x = x0;
    x[i] += step;
    simplex[static_cast<std::size_t>(i) + 1] = {x, f(x)};
  }

  auto by_value = [](const SimplexResult& a, const SimplexResult& b) { return a.fx < b.fx; };
  std::stable_sort(simplex.begin(), simplex.end(), by_value);

  for (int iter = 0; iter < max_iterations; ++iter) {
    const double best = simplex.front().fx;
    const double worst = simplex.back().fx;
    if (std::isfinite(best) && worst - best < tolerance * (std::abs(best) + tolerance)) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
    for (std::size_t i = 0; i + 1 < simplex.size(); ++i) centroid += simplex[i].x;
    centroid /= static_cast<double>(dim);

    const double second_worst = simplex[simplex.size() - 2].fx;
    Eigen::VectorXd xr = centroid + (centroid - simplex.back().x);
    double fr = f(xr);

    if (fr < best) {
      Eigen::VectorXd xe = centroid + 2.0 * (centroid - simplex.back().x);
      double fe = f(xe);
      simplex.back() = fe < fr ? SimplexResult{xe, fe} : SimplexResult{xr, fr};
    } else if (fr < second_worst) {
      simplex.back() = {xr, fr};
    } else {
      const bool outside = fr < simplex.back().fx;
      Eigen::VectorXd xc;
      if (outside) {
        xc = centroid + 0.5 * (xr - centroid);
      } else {
        xc = centroid - 0.5 * (centroid - simplex.back().x);
      }
      double fc = f(xc);
      if (fc < std::min(fr, simplex.back().fx)) {
        simplex.back() = {xc, fc};
      } else {
        for (std::size_t i = 1; i < simplex.size(); ++i) {
          simplex[i].x = simplex.front().x + 0.5 * (simplex[i].x - simplex.front().x);
          simplex[i].fx = f(simplex[i].x);
        }
      }
    }
    std::stable_sort(simplex.begin(), simplex.end(), by_value);
  }
  return simplex.front();
}

}  // namespace

GPModel fit_hyperparams(const Eigen::Ref<const Eigen::VectorXd>& times,
                        const Eigen::Ref<const Eigen::VectorXd>& values, KernelFamily family,
                        const FitConfig& config) {
  if (times.size() < 3) {
    throw std::invalid_argument("fit_hyperparams requires at least 3 training points");
  }
  if (!times.allFinite() || !values.allFinite()) {
    throw std::invalid_argument("fit_hyperparams requires finite training data");
  }
  if (config.num_starts < 1) {
    throw std::invalid_argument("fit_hyperparams requires at least one start");
  }

  const bool has_extra = kernel_has_extra(family);
  const Eigen::Index dim = has_extra ? 4 : 3;

  const double span = times.maxCoeff() - times.minCoeff();
  const double y_var = (values.array() - values.mean()).square().mean();
  Eigen::VectorXd heuristic(dim);
  heuristic[0] = std::log(std::max(span / 10.0, 1e-2));      // lengthscale
  heuristic[1] = std::log(y_var > 0.0 ? y_var : 1.0);        // signal variance
  heuristic[2] = heuristic[1] + std::log(1e-2);              // noise variance
  if (has_extra) heuristic[3] = 0.0;

  auto make_spec = [&](const Eigen::VectorXd& p) {
    KernelSpec spec;
    spec.family = family;
    spec.lengthscale = std::exp(p[0]);
    spec.signal_variance = std::exp(p[1]);
    spec.extra = has_extra ? std::exp(p[3]) : 1.0;
    return spec;
  };
  auto objective = [&](const Eigen::VectorXd& p) -> double {
    if ((p.array().abs() > 40.0).any()) return kInf;
    try {
      GPModel model(make_spec(p), std::exp(p[2]), times, values);
      const double lml = model.log_marginal_likelihood();
      return std::isfinite(lml) ? -lml : kInf;
    } catch (const NumericError&) {
      return kInf;
    } catch (const std::domain_error&) {
      return kInf;
    }
  };

  Rng rng(config.seed);
  SimplexResult best;
  for (int s = 0; s < config.num_starts; ++s) {
    Eigen::VectorXd start = heuristic;
    if (s > 0) {
      for (Eigen::Index i = 0; i < dim; ++i) {
        start[i] += rng.uniform(-1.0, 1.0) * std::log(1e2);
      }
    }
    SimplexResult r = nelder_mead(objective, start, config.max_iterations, config.tolerance);
    if (r.fx < best.fx) best = r;
  }
  if (!std::isfinite(best.fx)) {
    throw NumericError("hyperparameter fit failed: no start produced a finite objective");
  }
  return GPModel(make_spec(best.x), std::exp(best.x[2]), times, values);
}

}  // namespace gpstop

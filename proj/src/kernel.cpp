#include "gpstop/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace gpstop {
namespace {

double eval_unchecked(const KernelSpec& spec, double s, double t) {
  const double d = s - t;
  switch (spec.family) {
    case KernelFamily::Exponential:
      return spec.signal_variance * std::exp(-std::abs(d) / spec.lengthscale);
    case KernelFamily::SquaredExponential:
      return spec.signal_variance * std::exp(-0.5 * d * d / (spec.lengthscale * spec.lengthscale));
    case KernelFamily::RationalQuadratic:
      return spec.signal_variance *
             std::pow(1.0 + d * d / (2.0 * spec.extra * spec.lengthscale * spec.lengthscale),
                      -spec.extra);
    case KernelFamily::Linear:
      // Bias term keeps the induced regressor affine rather than homogeneous.
      return spec.signal_variance *
             (spec.extra + s * t / (spec.lengthscale * spec.lengthscale));
  }
  throw std::invalid_argument("unknown kernel family");
}

}  // namespace

KernelFamily kernel_family_from_string(std::string_view name) {
  if (name == "exponential") return KernelFamily::Exponential;
  if (name == "squared_exponential") return KernelFamily::SquaredExponential;
  if (name == "rational_quadratic") return KernelFamily::RationalQuadratic;
  if (name == "linear") return KernelFamily::Linear;
  throw std::invalid_argument("unknown kernel family: " + std::string(name));
}

std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::Exponential: return "exponential";
    case KernelFamily::SquaredExponential: return "squared_exponential";
    case KernelFamily::RationalQuadratic: return "rational_quadratic";
    case KernelFamily::Linear: return "linear";
  }
  return "unknown";
}

bool kernel_has_extra(KernelFamily family) {
  return family == KernelFamily::RationalQuadratic || family == KernelFamily::Linear;
}

void validate(const KernelSpec& spec) {
  if (!(spec.lengthscale > 0.0)) {
    throw std::domain_error("kernel lengthscale must be positive");
  }
  if (!(spec.signal_variance > 0.0)) {
    throw std::domain_error("kernel signal variance must be positive");
  }
  if (kernel_has_extra(spec.family) && !(spec.extra > 0.0)) {
    throw std::domain_error("kernel shape parameter must be positive");
  }
}

double kernel_eval(const KernelSpec& spec, double s, double t) {
  validate(spec);
  return eval_unchecked(spec, s, t);
}

Eigen::MatrixXd kernel_matrix(const KernelSpec& spec,
                              const Eigen::Ref<const Eigen::VectorXd>& s,
                              const Eigen::Ref<const Eigen::VectorXd>& t) {
  validate(spec);
  Eigen::MatrixXd k(s.size(), t.size());
  for (Eigen::Index j = 0; j < t.size(); ++j) {
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      k(i, j) = eval_unchecked(spec, s[i], t[j]);
    }
  }
  return k;
}

Eigen::VectorXd kernel_vector(const KernelSpec& spec,
                              const Eigen::Ref<const Eigen::VectorXd>& s, double t) {
  validate(spec);
  Eigen::VectorXd k(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    k[i] = eval_unchecked(spec, s[i], t);
  }
  return k;
}

}  // namespace gpstop

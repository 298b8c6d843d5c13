#pragma once

#include <Eigen/Core>
#include <string>
#include <string_view>

namespace gpstop {

enum class KernelFamily { Exponential, SquaredExponential, RationalQuadratic, Linear };

KernelFamily kernel_family_from_string(std::string_view name);
std::string to_string(KernelFamily family);

/// Stationary-or-linear covariance function on 1-D time indices.
///
/// `extra` is the family-specific shape parameter: the mixture exponent of
/// the rational-quadratic kernel and the dimensionless bias of the linear
/// kernel. It is ignored by the exponential and squared-exponential
/// families.
struct KernelSpec {
  KernelFamily family = KernelFamily::Exponential;
  double lengthscale = 1.0;
  double signal_variance = 1.0;
  double extra = 1.0;
};

/// True when `extra` participates in kernel evaluation for this family.
bool kernel_has_extra(KernelFamily family);

/// Throws std::domain_error when a scale parameter is not strictly positive.
void validate(const KernelSpec& spec);

/// k(s, s'); symmetric in its time arguments.
double kernel_eval(const KernelSpec& spec, double s, double t);

/// Gram matrix [k(s_i, t_j)].
Eigen::MatrixXd kernel_matrix(const KernelSpec& spec,
                              const Eigen::Ref<const Eigen::VectorXd>& s,
                              const Eigen::Ref<const Eigen::VectorXd>& t);

/// Cross-covariance vector [k(s_i, t)].
Eigen::VectorXd kernel_vector(const KernelSpec& spec,
                              const Eigen::Ref<const Eigen::VectorXd>& s, double t);

}  // namespace gpstop

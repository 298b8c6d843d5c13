#pragma once

#include <Eigen/Core>

namespace gpstop {

/// Lower Cholesky factor of a symmetric PSD matrix, with jitter escalation:
/// a clean factorization is attempted first, then 1e-10 times the mean
/// diagonal is added and grown tenfold for up to five retries. Throws
/// NumericError when every attempt fails. `applied_jitter`, when non-null,
/// receives the jitter that succeeded (0 for the clean attempt).
Eigen::MatrixXd jittered_cholesky(const Eigen::Ref<const Eigen::MatrixXd>& a,
                                  double* applied_jitter = nullptr);

}  // namespace gpstop

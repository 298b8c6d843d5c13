#include "gpstop/linalg.hpp"

#include <Eigen/Cholesky>

#include "gpstop/errors.hpp"

namespace gpstop {

Eigen::MatrixXd jittered_cholesky(const Eigen::Ref<const Eigen::MatrixXd>& a,
                                  double* applied_jitter) {
  const Eigen::Index n = a.rows();
  if (n != a.cols()) {
    throw NumericError("jittered_cholesky: matrix is not square");
  }
  double mean_diag = n > 0 ? a.diagonal().mean() : 0.0;
  double base = 1e-10 * mean_diag;
  if (!(base > 0.0)) base = 1e-12;

  double jitter = 0.0;
  for (int attempt = 0; attempt <= 5; ++attempt) {
    Eigen::MatrixXd m = a;
    if (jitter > 0.0) m.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() == Eigen::Success) {
      if (applied_jitter != nullptr) *applied_jitter = jitter;
      return llt.matrixL();
    }
    jitter = attempt == 0 ? base : jitter * 10.0;
  }
  throw NumericError("Cholesky factorization failed after jitter escalation");
}

}  // namespace gpstop

#include "gpwish/cov_matrix.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "gpwish/errors.hpp"

namespace gpwish {

CovMatrix::CovMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
    throw ConfigError("covariance matrix must be square and non-empty");
  }
  const double asym =
      (entries_ - entries_.transpose()).cwiseAbs().maxCoeff();
  if (!(asym <= 1e-12)) {
    throw ConfigError("covariance matrix asymmetric beyond 1e-12 (max |A - A^T| = " +
                      std::to_string(asym) + ")");
  }
  if (!(entries_.diagonal().minCoeff() > 0.0)) {
    throw NotPositiveDefiniteError("covariance matrix has a non-positive diagonal entry");
  }
}

void CovMatrix::factorize() const {
  if (factorized_) return;
  Eigen::LLT<Eigen::MatrixXd> llt(entries_);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefiniteError(
        "Cholesky factorization failed: matrix not positive definite (dim " +
        std::to_string(dim()) + ")");
  }
  chol_lower_ = llt.matrixL();
  log_det_ = 2.0 * chol_lower_.diagonal().array().log().sum();
  factorized_ = true;
}

const Eigen::MatrixXd& CovMatrix::chol_lower() const {
  factorize();
  return chol_lower_;
}

double CovMatrix::log_det() const {
  factorize();
  return log_det_;
}

}  // namespace gpwish

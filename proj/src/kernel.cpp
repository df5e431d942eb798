#include "gpwish/kernel.hpp"

namespace gpwish {

CovMatrix build_kernel_matrix(const Eigen::MatrixXd& X, const HyperParams& hp,
                              bool include_noise, double jitter) {
  const Eigen::Index p = X.rows();
  if (p < 1) throw ConfigError("build_kernel_matrix: empty design");
  if (X.cols() != hp.input_dim()) {
    throw ConfigError("build_kernel_matrix: design/hyperparameter dimension mismatch");
  }
  if (jitter < 0.0) throw ConfigError("build_kernel_matrix: negative jitter");

  Eigen::MatrixXd K(p, p);
  const double diag = 1.0 + (include_noise ? hp.noise_var() : 0.0) + jitter;
  for (Eigen::Index i = 0; i < p; ++i) {
    K(i, i) = diag;
    for (Eigen::Index j = i + 1; j < p; ++j) {
      const double k = ard_se_kernel(X.row(i), X.row(j), hp.log_lengthscales);
      K(i, j) = k;
      K(j, i) = k;
    }
  }
  return CovMatrix(std::move(K));
}

Eigen::MatrixXd cross_kernel_matrix(const Eigen::MatrixXd& A,
                                    const Eigen::MatrixXd& B,
                                    const HyperParams& hp) {
  if (A.cols() != hp.input_dim() || B.cols() != hp.input_dim()) {
    throw ConfigError("cross_kernel_matrix: dimension mismatch");
  }
  Eigen::MatrixXd K(A.rows(), B.rows());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < B.rows(); ++j) {
      K(i, j) = ard_se_kernel(A.row(i), B.row(j), hp.log_lengthscales);
    }
  }
  return K;
}

}  // namespace gpwish

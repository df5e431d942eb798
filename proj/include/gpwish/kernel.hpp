#ifndef GPWISH_KERNEL_HPP
#define GPWISH_KERNEL_HPP

#include <Eigen/Dense>
#include <cmath>

#include "gpwish/cov_matrix.hpp"
#include "gpwish/errors.hpp"
#include "gpwish/hyperparams.hpp"

namespace gpwish {

// Squared-exponential correlation with one lengthscale per input dimension:
// exp(-1/2 * sum_q (x_q - x'_q)^2 / l_q^2). Value in (0, 1], and exactly 1
// at zero distance.
inline double ard_se_kernel(const Eigen::Ref<const Eigen::VectorXd>& x,
                            const Eigen::Ref<const Eigen::VectorXd>& x_prime,
                            const Eigen::Ref<const Eigen::VectorXd>& log_lengthscales) {
  const Eigen::Index d = log_lengthscales.size();
  if (x.size() != d || x_prime.size() != d) {
    throw ConfigError("ard_se_kernel: input dimension mismatch");
  }
  double s = 0.0;
  for (Eigen::Index q = 0; q < d; ++q) {
    const double diff = x[q] - x_prime[q];
    const double inv_l = std::exp(-log_lengthscales[q]);
    const double z = diff * inv_l;
    s += z * z;
  }
  return std::exp(-0.5 * s);
}

// Kernel matrix over the rows of X. Each off-diagonal entry is evaluated once
// and mirrored, so the result is exactly symmetric. The diagonal is
// 1 (+ noise variance when requested) + jitter.
CovMatrix build_kernel_matrix(const Eigen::MatrixXd& X, const HyperParams& hp,
                              bool include_noise, double jitter);

// Cross-kernel between the rows of A (p) and B (q); returns p x q.
Eigen::MatrixXd cross_kernel_matrix(const Eigen::MatrixXd& A,
                                    const Eigen::MatrixXd& B,
                                    const HyperParams& hp);

}  // namespace gpwish

#endif

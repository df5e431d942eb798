#ifndef GPWISH_COV_MATRIX_HPP
#define GPWISH_COV_MATRIX_HPP

#include <Eigen/Dense>

namespace gpwish {

// Symmetric positive-definite matrix with a cached lower-triangular Cholesky
// factor and log-determinant. Factorization is lazy: entries are validated on
// construction, the factor is computed on first use and kept.
class CovMatrix {
 public:
  // Requires |M - M^T|_max <= 1e-12 and strictly positive diagonal.
  explicit CovMatrix(Eigen::MatrixXd entries);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXd& entries() const { return entries_; }

  bool factorized() const { return factorized_; }

  // Computes the factor if absent. Throws NotPositiveDefiniteError when a
  // pivot <= 0 is encountered; the matrix itself stays usable.
  void factorize() const;

  // Lower-triangular L with L * L^T == entries(). Factorizes on demand.
  const Eigen::MatrixXd& chol_lower() const;

  // log|entries| = 2 * sum(log diag(L)). Factorizes on demand.
  double log_det() const;

 private:
  Eigen::MatrixXd entries_;
  mutable Eigen::MatrixXd chol_lower_;
  mutable double log_det_ = 0.0;
  mutable bool factorized_ = false;
};

}  // namespace gpwish

#endif

#ifndef GPWISH_TEST_HELPERS_HPP
#define GPWISH_TEST_HELPERS_HPP

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "gpwish/rng.hpp"

namespace gpwish::testing {

// Dense reference computations, deliberately built on explicit inverses and
// determinants so they share nothing with the triangular-solve code paths
// they are used to check.

inline double dense_mvn_logpdf(const Eigen::VectorXd& y, const Eigen::MatrixXd& M) {
  const auto p = static_cast<double>(y.size());
  const Eigen::MatrixXd Minv = M.inverse();
  const double quad = y.dot(Minv * y);
  return -0.5 * quad - 0.5 * std::log(M.determinant()) -
         0.5 * p * std::log(2.0 * std::numbers::pi);
}

inline double dense_wishart_unnorm(const Eigen::MatrixXd& S,
                                   const Eigen::MatrixXd& V, int n) {
  const auto p = static_cast<double>(S.rows());
  const double trace = (V.inverse() * S).trace();
  return 0.5 * (n - p - 1.0) * std::log(S.determinant()) -
         0.5 * n * std::log(V.determinant()) - 0.5 * trace;
}

inline Eigen::MatrixXd random_spd(int p, Rng& rng, double diag_boost = 0.5) {
  Eigen::MatrixXd B(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) B(i, j) = rng.normal();
  }
  Eigen::MatrixXd S = (B * B.transpose()) / static_cast<double>(p);
  S += diag_boost * Eigen::MatrixXd::Identity(p, p);
  return S;
}

inline Eigen::MatrixXd random_matrix(int rows, int cols, Rng& rng, double lo,
                                     double hi) {
  Eigen::MatrixXd M(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) M(i, j) = rng.uniform(lo, hi);
  }
  return M;
}

// Monte Carlo standard error of a correlated chain mean via batch means.
inline double batch_means_se(const std::vector<double>& chain, int n_batches = 50) {
  const int n = static_cast<int>(chain.size());
  const int batch = n / n_batches;
  std::vector<double> means;
  for (int b = 0; b < n_batches; ++b) {
    double s = 0.0;
    for (int i = b * batch; i < (b + 1) * batch; ++i) s += chain[static_cast<std::size_t>(i)];
    means.push_back(s / batch);
  }
  double grand = 0.0;
  for (double m : means) grand += m;
  grand /= n_batches;
  double var = 0.0;
  for (double m : means) var += (m - grand) * (m - grand);
  var /= (n_batches - 1);
  return std::sqrt(var / n_batches);
}

}  // namespace gpwish::testing

#endif

#ifndef GPWISH_GP_HPP
#define GPWISH_GP_HPP

#include <Eigen/Dense>
#include <vector>

#include "gpwish/cov_matrix.hpp"
#include "gpwish/dataset.hpp"
#include "gpwish/hyperparams.hpp"

namespace gpwish {

// Posterior-averaged predictive distribution per test point, de-standardised
// to original response units.
struct PredictiveSummary {
  Eigen::VectorXd mean;
  Eigen::VectorXd sd;
  Eigen::VectorXd lo95;
  Eigen::VectorXd hi95;

  int n_points() const { return static_cast<int>(mean.size()); }
};

// Zero-mean multivariate-normal log density of y under covariance sigma,
// computed through the Cholesky factor (no explicit inverse):
// -1/2 y' S^-1 y - 1/2 log|S| - p/2 log(2 pi).
double gp_log_likelihood(const Eigen::VectorXd& y, const CovMatrix& sigma);

// Zero-mean GP conditional at the test rows, on the standardised scale.
// means = K*' (K + s_n^2 I)^-1 y; vars = 1 + s_n^2 - K*' (K + s_n^2 I)^-1 K*,
// floored at jitter.
std::pair<Eigen::VectorXd, Eigen::VectorXd> gp_predict(
    const Dataset& train, const Eigen::MatrixXd& test_X, const HyperParams& hp,
    double jitter = 1e-8);

// Moment-matched Gaussian mixture over per-sample predictive distributions.
// Exposed separately so the combination rule can be checked on its own:
// mean = avg(means), var = avg(vars) + (avg(means^2) - mean^2).
std::pair<Eigen::VectorXd, Eigen::VectorXd> combine_predictions(
    const std::vector<Eigen::VectorXd>& means,
    const std::vector<Eigen::VectorXd>& vars);

// Predictive summary averaged over posterior hyperparameter samples and
// de-standardised via the training statistics. 95% intervals use
// mean +/- 1.959964 sd.
PredictiveSummary mixture_predictive(const Dataset& train,
                                     const Eigen::MatrixXd& test_X,
                                     const std::vector<HyperParams>& samples,
                                     double jitter = 1e-8);

}  // namespace gpwish

#endif

#include "gpwish/gp.hpp"

#include <cmath>
#include <numbers>

#include "gpwish/errors.hpp"
#include "gpwish/kernel.hpp"

namespace gpwish {

namespace {
const double kLog2Pi = std::log(2.0 * std::numbers::pi);
constexpr double kZ95 = 1.959964;  // 97.5% normal quantile
}  // namespace

double gp_log_likelihood(const Eigen::VectorXd& y, const CovMatrix& sigma) {
  if (y.size() != sigma.dim()) {
    throw ConfigError("gp_log_likelihood: response/covariance dimension mismatch");
  }
  const Eigen::MatrixXd& L = sigma.chol_lower();
  const Eigen::VectorXd w = L.triangularView<Eigen::Lower>().solve(y);
  const auto p = static_cast<double>(y.size());
  return -0.5 * w.squaredNorm() - 0.5 * sigma.log_det() - 0.5 * p * kLog2Pi;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> gp_predict(
    const Dataset& train, const Eigen::MatrixXd& test_X, const HyperParams& hp,
    double jitter) {
  if (test_X.cols() != train.input_dim()) {
    throw ConfigError("gp_predict: test input dimension mismatch");
  }
  const CovMatrix K = build_kernel_matrix(train.X, hp, /*include_noise=*/true, jitter);
  const Eigen::MatrixXd& L = K.chol_lower();

  // alpha = (K + s_n^2 I)^-1 y via two triangular solves
  Eigen::VectorXd alpha = L.triangularView<Eigen::Lower>().solve(train.y);
  L.transpose().triangularView<Eigen::Upper>().solveInPlace(alpha);

  const Eigen::MatrixXd Ks = cross_kernel_matrix(train.X, test_X, hp);  // p x q
  Eigen::VectorXd means = Ks.transpose() * alpha;

  const Eigen::MatrixXd W = L.triangularView<Eigen::Lower>().solve(Ks);
  const double prior_var = 1.0 + hp.noise_var();
  Eigen::VectorXd vars(test_X.rows());
  for (Eigen::Index j = 0; j < test_X.rows(); ++j) {
    vars[j] = std::max(prior_var - W.col(j).squaredNorm(), jitter);
  }
  return {std::move(means), std::move(vars)};
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> combine_predictions(
    const std::vector<Eigen::VectorXd>& means,
    const std::vector<Eigen::VectorXd>& vars) {
  if (means.empty() || means.size() != vars.size()) {
    throw ConfigError("combine_predictions: need matching, non-empty sample sets");
  }
  const Eigen::Index q = means.front().size();
  Eigen::VectorXd mean_sum = Eigen::VectorXd::Zero(q);
  Eigen::VectorXd sq_sum = Eigen::VectorXd::Zero(q);
  Eigen::VectorXd var_sum = Eigen::VectorXd::Zero(q);
  for (std::size_t s = 0; s < means.size(); ++s) {
    if (means[s].size() != q || vars[s].size() != q) {
      throw ConfigError("combine_predictions: inconsistent prediction lengths");
    }
    mean_sum += means[s];
    sq_sum += means[s].cwiseProduct(means[s]);
    var_sum += vars[s];
  }
  const auto S = static_cast<double>(means.size());
  Eigen::VectorXd mean = mean_sum / S;
  Eigen::VectorXd var(q);
  for (Eigen::Index j = 0; j < q; ++j) {
    const double between = sq_sum[j] / S - mean[j] * mean[j];
    var[j] = var_sum[j] / S + std::max(between, 0.0);
  }
  return {std::move(mean), std::move(var)};
}

PredictiveSummary mixture_predictive(const Dataset& train,
                                     const Eigen::MatrixXd& test_X,
                                     const std::vector<HyperParams>& samples,
                                     double jitter) {
  if (samples.empty()) {
    throw ConfigError("mixture_predictive: empty posterior sample set");
  }
  std::vector<Eigen::VectorXd> means, vars;
  means.reserve(samples.size());
  vars.reserve(samples.size());
  for (const HyperParams& hp : samples) {
    auto [m, v] = gp_predict(train, test_X, hp, jitter);
    means.push_back(std::move(m));
    vars.push_back(std::move(v));
  }
  auto [mean_std, var_std] = combine_predictions(means, vars);

  PredictiveSummary out;
  const Eigen::Index q = mean_std.size();
  out.mean.resize(q);
  out.sd.resize(q);
  out.lo95.resize(q);
  out.hi95.resize(q);
  for (Eigen::Index j = 0; j < q; ++j) {
    out.mean[j] = train.destandardise_y(mean_std[j]);
    out.sd[j] = train.y_sd * std::sqrt(var_std[j]);
    out.lo95[j] = out.mean[j] - kZ95 * out.sd[j];
    out.hi95[j] = out.mean[j] + kZ95 * out.sd[j];
  }
  return out;
}

}  // namespace gpwish

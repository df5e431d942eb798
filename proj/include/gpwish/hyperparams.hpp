#ifndef GPWISH_HYPERPARAMS_HPP
#define GPWISH_HYPERPARAMS_HPP

#include <Eigen/Dense>
#include <cmath>

namespace gpwish {

// Kernel hyperparameters in unconstrained (log) coordinates: one
// log-lengthscale per input dimension plus the log observation-noise
// standard deviation.
struct HyperParams {
  Eigen::VectorXd log_lengthscales;
  double log_noise_sd = 0.0;

  int input_dim() const { return static_cast<int>(log_lengthscales.size()); }
  double lengthscale(int q) const { return std::exp(log_lengthscales[q]); }
  double noise_sd() const { return std::exp(log_noise_sd); }
  double noise_var() const { return std::exp(2.0 * log_noise_sd); }
};

// Mapping between HyperParams and the flat sampling vector. The noise
// coordinate is part of the vector only when it is learned; otherwise it is
// pinned to fixed_log_noise_sd and the vector holds the lengthscales alone.
struct ParamLayout {
  int input_dim = 0;
  bool learn_noise = true;
  double fixed_log_noise_sd = 0.0;

  int param_count() const { return input_dim + (learn_noise ? 1 : 0); }

  HyperParams unpack(const Eigen::VectorXd& theta) const {
    HyperParams hp;
    hp.log_lengthscales = theta.head(input_dim);
    hp.log_noise_sd = learn_noise ? theta[input_dim] : fixed_log_noise_sd;
    return hp;
  }

  Eigen::VectorXd pack(const HyperParams& hp) const {
    Eigen::VectorXd theta(param_count());
    theta.head(input_dim) = hp.log_lengthscales;
    if (learn_noise) theta[input_dim] = hp.log_noise_sd;
    return theta;
  }
};

}  // namespace gpwish

#endif

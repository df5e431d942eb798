#include "gpwish/priors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gpwish/errors.hpp"
#include "gpwish/kernel.hpp"

namespace gpwish {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

std::string prior_kind_name(PriorKind kind) {
  switch (kind) {
    case PriorKind::NormalOnly: return "normal";
    case PriorKind::WishartOnly: return "wishart";
    case PriorKind::WishartPlusNormal: return "wishart_normal";
  }
  throw ConfigError("unknown prior kind");
}

PriorKind prior_kind_from_name(const std::string& name) {
  if (name == "normal") return PriorKind::NormalOnly;
  if (name == "wishart") return PriorKind::WishartOnly;
  if (name == "wishart_normal" || name == "wishart+normal") {
    return PriorKind::WishartPlusNormal;
  }
  throw ConfigError("unknown prior spec '" + name +
                    "' (expected normal, wishart, or wishart_normal)");
}

void PriorSpec::validate(int m, int p) const {
  if (uses_normal()) {
    if (normal_mean.size() != m || normal_sd.size() != m) {
      throw ConfigError("prior: normal mean/sd must have one entry per hyperparameter");
    }
    if (!(normal_sd.minCoeff() > 0.0)) {
      throw ConfigError("prior: normal sds must be strictly positive");
    }
  }
  if (kind == PriorKind::WishartOnly) {
    if (uniform_lo.size() != m || uniform_hi.size() != m) {
      throw ConfigError("prior: uniform bounds must have one entry per hyperparameter");
    }
    if (!((uniform_hi - uniform_lo).minCoeff() > 0.0)) {
      throw ConfigError("prior: uniform bounds must satisfy lo < hi componentwise");
    }
  }
  if (uses_wishart()) {
    if (wishart_dof <= 0) throw ConfigError("prior: Wishart dof must be positive");
    if (p > 0 && wishart_dof <= p) {
      throw ConfigError("prior: Wishart dof must exceed the training-set size (n > p)");
    }
  }
}

PriorSpec PriorSpec::with_defaults(PriorKind kind, const ParamLayout& layout,
                                   int wishart_dof) {
  const int m = layout.param_count();
  PriorSpec spec;
  spec.kind = kind;
  spec.wishart_dof = wishart_dof;
  spec.normal_mean = Eigen::VectorXd::Zero(m);
  spec.normal_sd = Eigen::VectorXd::Constant(m, 1.5);
  spec.uniform_lo = Eigen::VectorXd::Constant(m, -6.0);
  spec.uniform_hi = Eigen::VectorXd::Constant(m, 8.0);
  if (layout.learn_noise) {
    spec.uniform_lo[m - 1] = -7.0;
    spec.uniform_hi[m - 1] = 1.0;
  }
  return spec;
}

LookbackBuffer::LookbackBuffer(int capacity) : capacity_(capacity) {
  if (capacity < 1) throw ConfigError("look-back buffer capacity must be >= 1");
  entries_.reserve(static_cast<std::size_t>(capacity));
}

void LookbackBuffer::push(const Eigen::VectorXd& theta) {
  if (is_full()) {
    entries_[static_cast<std::size_t>(head_)] = theta;  // overwrite oldest
    head_ = (head_ + 1) % capacity_;
  } else {
    entries_.push_back(theta);
  }
}

void LookbackBuffer::clear() {
  entries_.clear();
  head_ = 0;
}

const Eigen::VectorXd& LookbackBuffer::entry(int i) const {
  if (i < 0 || i >= size()) throw ConfigError("look-back buffer index out of range");
  return entries_[static_cast<std::size_t>((head_ + i) % size())];
}

Eigen::VectorXd lookback_mean(const LookbackBuffer& buffer,
                              const Eigen::VectorXd& proposal) {
  if (!buffer.is_full()) {
    throw WindowNotReadyError("look-back window not full: have " +
                              std::to_string(buffer.size()) + " of " +
                              std::to_string(buffer.capacity()) + " entries");
  }
  const int n = buffer.capacity() + 1;
  const Eigen::Index m = proposal.size();
  if (buffer.entry(0).size() != m) {
    throw ConfigError("lookback_mean: buffered vectors and proposal disagree in dimension");
  }
  Eigen::VectorXd mean(m);
  std::vector<double> vals(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < m; ++k) {
    for (int i = 0; i < buffer.capacity(); ++i) vals[static_cast<std::size_t>(i)] = buffer.entry(i)[k];
    vals.back() = proposal[k];
    std::sort(vals.begin(), vals.end());
    double s = 0.0;
    for (double v : vals) s += v;
    mean[k] = s / static_cast<double>(n);
  }
  return mean;
}

CovMatrix assemble_scale_matrix(const LookbackBuffer& buffer,
                                const Eigen::VectorXd& proposal,
                                const Eigen::MatrixXd& X,
                                const ParamLayout& layout, double jitter) {
  const Eigen::VectorXd mean = lookback_mean(buffer, proposal);
  const HyperParams hp = layout.unpack(mean);
  CovMatrix v = build_kernel_matrix(X, hp, /*include_noise=*/false, jitter);
  try {
    v.factorize();
    return v;
  } catch (const NotPositiveDefiniteError&) {
    if (jitter >= 1e-6) throw;
    // near-singular at extreme mean lengthscales; one retry at a larger jitter
  }
  CovMatrix retry = build_kernel_matrix(X, hp, /*include_noise=*/false, 1e-6);
  retry.factorize();
  return retry;
}

double log_multivariate_gamma(int p, double a) {
  double r = 0.25 * p * (p - 1) * std::log(std::numbers::pi);
  for (int j = 1; j <= p; ++j) r += std::lgamma(a + 0.5 * (1.0 - j));
  return r;
}

double wishart_log_density(const CovMatrix& sigma, const CovMatrix& v, int dof,
                           bool normalised) {
  const int p = sigma.dim();
  if (v.dim() != p) throw ConfigError("wishart_log_density: dimension mismatch");
  if (dof <= p) throw ConfigError("wishart_log_density: requires dof > p");

  // tr(V^-1 Sigma) = |L_v^-1 L_s|_F^2 with Sigma = L_s L_s'
  const Eigen::MatrixXd W =
      v.chol_lower().triangularView<Eigen::Lower>().solve(sigma.chol_lower());
  const double trace = W.squaredNorm();

  const double n = static_cast<double>(dof);
  double logd = 0.5 * (n - p - 1.0) * sigma.log_det() - 0.5 * n * v.log_det() -
                0.5 * trace;
  if (normalised) {
    logd -= 0.5 * n * p * std::numbers::ln2 + log_multivariate_gamma(p, 0.5 * n);
  }
  return logd;
}

double log_marginal_prior(const Eigen::VectorXd& theta, const PriorSpec& spec) {
  const Eigen::Index m = theta.size();
  if (spec.kind == PriorKind::WishartOnly) {
    for (Eigen::Index k = 0; k < m; ++k) {
      if (theta[k] < spec.uniform_lo[k] || theta[k] > spec.uniform_hi[k]) {
        return kNegInf;
      }
    }
    return 0.0;
  }
  const double log2pi = std::log(2.0 * std::numbers::pi);
  double logp = 0.0;
  for (Eigen::Index k = 0; k < m; ++k) {
    const double z = (theta[k] - spec.normal_mean[k]) / spec.normal_sd[k];
    logp += -0.5 * z * z - std::log(spec.normal_sd[k]) - 0.5 * log2pi;
  }
  return logp;
}

}  // namespace gpwish

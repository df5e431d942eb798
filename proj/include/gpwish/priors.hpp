#ifndef GPWISH_PRIORS_HPP
#define GPWISH_PRIORS_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "gpwish/cov_matrix.hpp"
#include "gpwish/hyperparams.hpp"

namespace gpwish {

enum class PriorKind { NormalOnly, WishartOnly, WishartPlusNormal };

std::string prior_kind_name(PriorKind kind);
PriorKind prior_kind_from_name(const std::string& name);

// One of the three prior specifications. Normal marginals act on the log
// coordinates; the WishartOnly variant replaces them with a flat box whose
// bounds should be wide enough never to bind.
struct PriorSpec {
  PriorKind kind = PriorKind::NormalOnly;
  Eigen::VectorXd normal_mean;  // used unless WishartOnly
  Eigen::VectorXd normal_sd;
  Eigen::VectorXd uniform_lo;  // used when WishartOnly
  Eigen::VectorXd uniform_hi;
  int wishart_dof = 0;  // look-back window length n; used unless NormalOnly

  bool uses_wishart() const { return kind != PriorKind::NormalOnly; }
  bool uses_normal() const { return kind != PriorKind::WishartOnly; }

  // Throws ConfigError on dimension or ordering violations; p is the
  // training-set size the Wishart density will be evaluated over
  // (checked only when the Wishart factor is active; pass 0 to skip).
  void validate(int m, int p = 0) const;

  // Defaults: Normal(0, 1.5^2) per coordinate; box log l in [-6, 8] and
  // log noise sd in [-7, 1].
  static PriorSpec with_defaults(PriorKind kind, const ParamLayout& layout,
                                 int wishart_dof = 0);
};

// Ring buffer of the n-1 most recently accepted hyperparameter vectors
// (log coordinates, flat layout). Push evicts the oldest entry once full.
class LookbackBuffer {
 public:
  explicit LookbackBuffer(int capacity);

  int capacity() const { return capacity_; }
  int size() const { return static_cast<int>(entries_.size()); }
  bool is_full() const { return size() == capacity_; }

  void push(const Eigen::VectorXd& theta);
  void clear();

  // Entries oldest-first; index 0 is the oldest retained vector.
  const Eigen::VectorXd& entry(int i) const;

 private:
  int capacity_;
  std::vector<Eigen::VectorXd> entries_;  // rotated so entries_[head_] is oldest
  int head_ = 0;
};

// Componentwise mean of {buffered vectors, proposal}, i.e. over n = capacity+1
// values. Each coordinate is summed in sorted order, so the result depends
// only on the multiset of window values, not their order.
// Throws WindowNotReadyError unless the buffer is full.
Eigen::VectorXd lookback_mean(const LookbackBuffer& buffer,
                              const Eigen::VectorXd& proposal);

// Scale matrix for the Wishart factor: the noise-free kernel matrix at the
// window-mean hyperparameters, plus jitter. Factorizes eagerly; if the base
// jitter fails the build is retried once at 1e-6 before giving up with
// NotPositiveDefiniteError (callers reject the proposal).
CovMatrix assemble_scale_matrix(const LookbackBuffer& buffer,
                                const Eigen::VectorXd& proposal,
                                const Eigen::MatrixXd& X,
                                const ParamLayout& layout, double jitter);

// Wishart log density of sigma given scale matrix v and dof n (n > p).
// Unnormalised form: (n-p-1)/2 log|sigma| - n/2 log|v| - 1/2 tr(v^-1 sigma);
// the normalised form subtracts np/2 log 2 + log Gamma_p(n/2) as well.
// The trace is computed via triangular solves against v's factor.
double wishart_log_density(const CovMatrix& sigma, const CovMatrix& v, int dof,
                           bool normalised = false);

// log Gamma_p(a), the multivariate gamma function.
double log_multivariate_gamma(int p, double a);

// Sum of independent marginal log prior densities at theta. For the
// WishartOnly box this is 0 inside (constant dropped) and -inf outside.
double log_marginal_prior(const Eigen::VectorXd& theta, const PriorSpec& spec);

}  // namespace gpwish

#endif

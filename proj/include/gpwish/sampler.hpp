#ifndef GPWISH_SAMPLER_HPP
#define GPWISH_SAMPLER_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "gpwish/cov_matrix.hpp"
#include "gpwish/dataset.hpp"
#include "gpwish/gp.hpp"
#include "gpwish/priors.hpp"
#include "gpwish/rng.hpp"

namespace gpwish {

struct SamplerConfig {
  int n_iter = 0;
  int burn_in = 0;
  int wishart_switch_on = 0;  // first iteration with the Wishart factor (1-based)
  int window_n = 0;           // look-back window length = Wishart dof
  Eigen::VectorXd step_sds;   // proposal sds, log coordinates, one per parameter
  int thin = 1;
  std::uint64_t seed = 0;
  bool learn_noise = true;
  double fixed_noise_sd = 0.05;  // used when learn_noise is false
  double jitter = 1e-8;

  // Throws ConfigError unless burn_in < n_iter, thin >= 1, steps finite and
  // nonnegative, and (when wishart is true) switch_on > window_n > p.
  void validate(int m, int p, bool wishart) const;
};

// Components of the (iteration-specific) log target at one hyperparameter
// vector. log_wishart is engaged only while the Wishart factor is active.
struct TargetParts {
  double log_lik = 0.0;
  double log_prior = 0.0;
  std::optional<double> log_wishart;

  double total() const;
};

// Accepted-state cache carried between iterations: the flat parameter vector,
// its target parts, and (once the Wishart phase needs it) the factorized
// noise-free kernel matrix it induces.
struct ChainState {
  Eigen::VectorXd theta;
  TargetParts parts;
  std::shared_ptr<const CovMatrix> noise_free;  // lazily filled, persists while theta does
};

// One iteration's record. The accepted-state parts mirror TargetParts; the
// proposal/current blocks keep both sides of the acceptance ratio so alpha is
// recomputable from the trace alone.
struct TraceRow {
  Eigen::VectorXd theta;  // state after the accept/reject decision
  bool accepted = false;
  double log_lik = 0.0;
  double log_prior = 0.0;
  std::optional<double> log_wishart;
  double alpha = 0.0;
  std::optional<double> scale_drift;  // |V_t - V_{t-1}|_F, t >= switch_on + 1

  double prop_log_lik = 0.0;
  double prop_log_prior = 0.0;
  std::optional<double> prop_log_wishart;
  double cur_log_lik = 0.0;
  double cur_log_prior = 0.0;
  std::optional<double> cur_log_wishart;
};

struct ChainTrace {
  std::vector<TraceRow> rows;  // rows[t-1] is iteration t
  ParamLayout layout;

  int n_iter() const { return static_cast<int>(rows.size()); }
  double acceptance_rate() const;

  // Post-burn-in iterations kept after thinning: t = burn_in + 1,
  // burn_in + 1 + thin, ... Returns indices into rows.
  std::vector<int> retained_indices(int burn_in, int thin) const;
  std::vector<HyperParams> posterior_samples(int burn_in, int thin) const;
};

// Symmetric componentwise normal random walk in log coordinates.
Eigen::VectorXd propose(const Eigen::VectorXd& current,
                        const Eigen::VectorXd& step_sds, Rng& rng);

// Target parts at theta: GP log likelihood (noise on the diagonal), marginal
// log prior, and -- when scale is non-null -- the Wishart log density of the
// noise-free kernel matrix induced by theta. Factorization failures and
// out-of-box values surface as -inf, never as exceptions.
TargetParts log_target(const Eigen::VectorXd& theta, const Dataset& data,
                       const PriorSpec& spec, const ParamLayout& layout,
                       const CovMatrix* scale, double jitter,
                       std::shared_ptr<const CovMatrix>* noise_free_out = nullptr);

// min(1, exp(proposal_total - current_total)) with -inf handled so the result
// is always in [0, 1].
double acceptance_probability(double proposal_total, double current_total);

struct StepResult {
  ChainState state;
  TraceRow row;
  std::shared_ptr<const CovMatrix> scale_matrix;  // V_t when assembled
};

// One Metropolis-Hastings step at iteration t (1-based). When the Wishart
// factor is active the scale matrix is assembled from {buffer, proposal} and
// both sides of the ratio are evaluated against it. The accepted state
// (new or retained) is pushed into the buffer.
StepResult mh_step(const ChainState& current, const Eigen::VectorXd& proposal,
                   const Dataset& data, const PriorSpec& spec,
                   const SamplerConfig& cfg, const ParamLayout& layout, int t,
                   LookbackBuffer& buffer, Rng& rng);

// Full chain: the initial state is drawn from the marginal prior (Normal
// specs) or the uniform box (Wishart spec); the Wishart factor enters the
// target from iteration wishart_switch_on onwards. Deterministic given the
// seed.
ChainTrace run_chain(const Dataset& data, const PriorSpec& spec,
                     const SamplerConfig& cfg);

}  // namespace gpwish

#endif

#include "gpwish/sampler.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "gpwish/errors.hpp"
#include "gpwish/kernel.hpp"

namespace gpwish {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

void SamplerConfig::validate(int m, int p, bool wishart) const {
  if (n_iter < 1) throw ConfigError("sampler: n_iter must be >= 1");
  if (burn_in < 0 || burn_in >= n_iter) {
    throw ConfigError("sampler: burn_in must satisfy 0 <= burn_in < n_iter");
  }
  if (thin < 1) throw ConfigError("sampler: thin must be >= 1");
  if (step_sds.size() != m) {
    throw ConfigError("sampler: step_sds must have one entry per hyperparameter (" +
                      std::to_string(m) + ")");
  }
  if (!step_sds.allFinite() || step_sds.minCoeff() < 0.0) {
    throw ConfigError("sampler: step_sds must be finite and nonnegative");
  }
  if (!(jitter >= 0.0)) throw ConfigError("sampler: jitter must be nonnegative");
  if (!learn_noise && !(fixed_noise_sd > 0.0)) {
    throw ConfigError("sampler: fixed noise sd must be positive");
  }
  if (wishart) {
    if (window_n <= p) {
      throw ConfigError("sampler: window_n must exceed the training-set size (n > p; got n = " +
                        std::to_string(window_n) + ", p = " + std::to_string(p) + ")");
    }
    if (wishart_switch_on <= window_n) {
      throw ConfigError("sampler: wishart_switch_on must exceed window_n (N0 > n)");
    }
    if (wishart_switch_on > n_iter) {
      throw ConfigError("sampler: wishart_switch_on exceeds n_iter; the Wishart factor would never activate");
    }
  }
}

double TargetParts::total() const {
  if (log_prior == kNegInf || log_lik == kNegInf) return kNegInf;
  double t = log_lik + log_prior;
  if (log_wishart) {
    if (*log_wishart == kNegInf) return kNegInf;
    t += *log_wishart;
  }
  return t;
}

double ChainTrace::acceptance_rate() const {
  if (rows.empty()) return 0.0;
  int acc = 0;
  for (const TraceRow& r : rows) acc += r.accepted ? 1 : 0;
  return static_cast<double>(acc) / static_cast<double>(rows.size());
}

std::vector<int> ChainTrace::retained_indices(int burn_in, int thin) const {
  std::vector<int> idx;
  for (int t = burn_in + 1; t <= n_iter(); t += thin) idx.push_back(t - 1);
  return idx;
}

std::vector<HyperParams> ChainTrace::posterior_samples(int burn_in, int thin) const {
  std::vector<HyperParams> samples;
  for (int i : retained_indices(burn_in, thin)) {
    samples.push_back(layout.unpack(rows[static_cast<std::size_t>(i)].theta));
  }
  return samples;
}

Eigen::VectorXd propose(const Eigen::VectorXd& current,
                        const Eigen::VectorXd& step_sds, Rng& rng) {
  if (current.size() != step_sds.size()) {
    throw ConfigError("propose: step_sds dimension mismatch");
  }
  Eigen::VectorXd next(current.size());
  for (Eigen::Index k = 0; k < current.size(); ++k) {
    next[k] = current[k] + step_sds[k] * rng.normal();
  }
  return next;
}

TargetParts log_target(const Eigen::VectorXd& theta, const Dataset& data,
                       const PriorSpec& spec, const ParamLayout& layout,
                       const CovMatrix* scale, double jitter,
                       std::shared_ptr<const CovMatrix>* noise_free_out) {
  TargetParts parts;
  parts.log_prior = log_marginal_prior(theta, spec);

  const HyperParams hp = layout.unpack(theta);
  try {
    const CovMatrix noisy =
        build_kernel_matrix(data.X, hp, /*include_noise=*/true, jitter);
    parts.log_lik = gp_log_likelihood(data.y, noisy);
  } catch (const NotPositiveDefiniteError&) {
    parts.log_lik = kNegInf;
  }

  if (scale != nullptr) {
    try {
      auto nf = std::make_shared<CovMatrix>(
          build_kernel_matrix(data.X, hp, /*include_noise=*/false, jitter));
      nf->factorize();
      parts.log_wishart =
          wishart_log_density(*nf, *scale, spec.wishart_dof, /*normalised=*/false);
      if (noise_free_out != nullptr) *noise_free_out = std::move(nf);
    } catch (const NotPositiveDefiniteError&) {
      parts.log_wishart = kNegInf;
    }
  }
  return parts;
}

double acceptance_probability(double proposal_total, double current_total) {
  if (proposal_total == kNegInf) return 0.0;
  if (current_total == kNegInf) return 1.0;
  return std::min(1.0, std::exp(proposal_total - current_total));
}

namespace {

// Wishart term of an already-held state against this iteration's scale
// matrix, filling the state's noise-free factor cache on first use.
double state_wishart_term(ChainState& state, const Dataset& data,
                          const PriorSpec& spec, const ParamLayout& layout,
                          const CovMatrix& scale, double jitter) {
  try {
    if (!state.noise_free) {
      auto nf = std::make_shared<CovMatrix>(build_kernel_matrix(
          data.X, layout.unpack(state.theta), /*include_noise=*/false, jitter));
      nf->factorize();
      state.noise_free = std::move(nf);
    }
    return wishart_log_density(*state.noise_free, scale, spec.wishart_dof,
                               /*normalised=*/false);
  } catch (const NotPositiveDefiniteError&) {
    return kNegInf;
  }
}

}  // namespace

StepResult mh_step(const ChainState& current, const Eigen::VectorXd& proposal,
                   const Dataset& data, const PriorSpec& spec,
                   const SamplerConfig& cfg, const ParamLayout& layout, int t,
                   LookbackBuffer& buffer, Rng& rng) {
  const bool wishart_active = spec.uses_wishart() && t >= cfg.wishart_switch_on;

  StepResult res;
  ChainState cur = current;  // shallow; noise_free shared

  if (wishart_active && !buffer.is_full()) {
    throw WindowNotReadyError(
        "mh_step: Wishart factor active at iteration " + std::to_string(t) +
        " but the look-back window holds " + std::to_string(buffer.size()) +
        " of " + std::to_string(buffer.capacity()) + " entries");
  }

  if (wishart_active) {
    try {
      res.scale_matrix = std::make_shared<CovMatrix>(
          assemble_scale_matrix(buffer, proposal, data.X, layout, cfg.jitter));
    } catch (const NotPositiveDefiniteError&) {
      res.scale_matrix = nullptr;  // unusable window: proposal is rejected
    }
  }

  TargetParts prop_parts;
  TargetParts cur_parts = cur.parts;
  std::shared_ptr<const CovMatrix> prop_noise_free;
  if (wishart_active) {
    if (res.scale_matrix) {
      prop_parts = log_target(proposal, data, spec, layout,
                              res.scale_matrix.get(), cfg.jitter, &prop_noise_free);
      cur_parts.log_wishart = state_wishart_term(cur, data, spec, layout,
                                                 *res.scale_matrix, cfg.jitter);
    } else {
      prop_parts = log_target(proposal, data, spec, layout, nullptr, cfg.jitter);
      prop_parts.log_wishart = kNegInf;
      cur_parts.log_wishart = kNegInf;
    }
  } else {
    prop_parts = log_target(proposal, data, spec, layout, nullptr, cfg.jitter);
  }

  const double alpha =
      acceptance_probability(prop_parts.total(), cur_parts.total());
  const double u = rng.uniform();
  const bool accepted = u < alpha;

  TraceRow row;
  row.accepted = accepted;
  row.alpha = alpha;
  row.prop_log_lik = prop_parts.log_lik;
  row.prop_log_prior = prop_parts.log_prior;
  row.prop_log_wishart = prop_parts.log_wishart;
  row.cur_log_lik = cur_parts.log_lik;
  row.cur_log_prior = cur_parts.log_prior;
  row.cur_log_wishart = cur_parts.log_wishart;

  if (accepted) {
    res.state.theta = proposal;
    res.state.parts = prop_parts;
    res.state.noise_free = std::move(prop_noise_free);
  } else {
    cur.parts = cur_parts;  // keep the Wishart term evaluated against V_t
    res.state = std::move(cur);
  }
  row.theta = res.state.theta;
  row.log_lik = res.state.parts.log_lik;
  row.log_prior = res.state.parts.log_prior;
  row.log_wishart = res.state.parts.log_wishart;

  buffer.push(res.state.theta);
  res.row = std::move(row);
  return res;
}

namespace {

Eigen::VectorXd draw_initial(const PriorSpec& spec, int m, Rng& rng) {
  Eigen::VectorXd theta(m);
  if (spec.kind == PriorKind::WishartOnly) {
    for (int k = 0; k < m; ++k) {
      theta[k] = rng.uniform(spec.uniform_lo[k], spec.uniform_hi[k]);
    }
  } else {
    for (int k = 0; k < m; ++k) {
      theta[k] = spec.normal_mean[k] + spec.normal_sd[k] * rng.normal();
    }
  }
  return theta;
}

}  // namespace

ChainTrace run_chain(const Dataset& data, const PriorSpec& spec,
                     const SamplerConfig& cfg) {
  data.validate();
  ParamLayout layout{data.input_dim(), cfg.learn_noise,
                     std::log(cfg.fixed_noise_sd)};
  const int m = layout.param_count();
  cfg.validate(m, data.n_points(), spec.uses_wishart());
  spec.validate(m, spec.uses_wishart() ? data.n_points() : 0);
  if (spec.uses_wishart() && spec.wishart_dof != cfg.window_n) {
    throw ConfigError("run_chain: prior wishart_dof and sampler window_n must agree");
  }

  Rng rng(cfg.seed);

  ChainState state;
  state.theta = draw_initial(spec, m, rng);
  state.parts = log_target(state.theta, data, spec, layout, nullptr, cfg.jitter);
  for (int attempt = 0; state.parts.total() == kNegInf; ++attempt) {
    if (attempt >= 100) {
      throw ConfigError("run_chain: could not find a finite-target initial state");
    }
    state.theta = draw_initial(spec, m, rng);
    state.parts = log_target(state.theta, data, spec, layout, nullptr, cfg.jitter);
  }

  const int buffer_cap = spec.uses_wishart() ? cfg.window_n - 1 : 1;
  LookbackBuffer buffer(buffer_cap);

  ChainTrace trace;
  trace.layout = layout;
  trace.rows.reserve(static_cast<std::size_t>(cfg.n_iter));

  std::shared_ptr<const CovMatrix> prev_scale;
  for (int t = 1; t <= cfg.n_iter; ++t) {
    const Eigen::VectorXd prop = propose(state.theta, cfg.step_sds, rng);
    StepResult step = mh_step(state, prop, data, spec, cfg, layout, t, buffer, rng);
    if (step.scale_matrix && prev_scale) {
      step.row.scale_drift =
          (step.scale_matrix->entries() - prev_scale->entries()).norm();
    }
    prev_scale = step.scale_matrix;
    state = std::move(step.state);
    trace.rows.push_back(std::move(step.row));
  }
  return trace;
}

}  // namespace gpwish

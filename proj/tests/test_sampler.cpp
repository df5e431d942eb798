#include <doctest.h>

#include <cmath>
#include <limits>

#include "gpwish/errors.hpp"
#include "gpwish/kernel.hpp"
#include "gpwish/sampler.hpp"
#include "test_helpers.hpp"

using namespace gpwish;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Dataset plain_dataset(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  Dataset d;
  d.X = X;
  d.y = y;
  d.input_means = Eigen::VectorXd::Zero(X.cols());
  d.input_sds = Eigen::VectorXd::Ones(X.cols());
  return d;
}

// Two far-separated design points: every achievable lengthscale leaves the
// kernel matrix at the identity, so the likelihood carries no information
// about the lengthscales.
Dataset uninformative_dataset(int d) {
  Eigen::MatrixXd X(2, d);
  X.row(0) = Eigen::VectorXd::Constant(d, -5e4);
  X.row(1) = Eigen::VectorXd::Constant(d, 5e4);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(2);
  return plain_dataset(X, y);
}

// 1-d responses drawn from a GP with a known lengthscale.
Dataset gp_draw_dataset(int p, double lengthscale, double noise_sd,
                        std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd X(p, 1);
  for (int i = 0; i < p; ++i) X(i, 0) = rng.uniform(-1.0, 1.0);
  HyperParams hp{Eigen::VectorXd::Constant(1, std::log(lengthscale)),
                 std::log(noise_sd)};
  const CovMatrix K = build_kernel_matrix(X, hp, true, 1e-10);
  Eigen::VectorXd z(p);
  for (int i = 0; i < p; ++i) z[i] = rng.normal();
  const Eigen::VectorXd y = K.chol_lower() * z;
  return plain_dataset(X, y);
}

}  // namespace

TEST_CASE("zero step sizes give a degenerate walk") {
  Rng rng(3);
  Eigen::VectorXd cur(3);
  cur << 0.1, -0.4, 2.0;
  const Eigen::VectorXd prop = propose(cur, Eigen::VectorXd::Zero(3), rng);
  CHECK((prop - cur).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("proposals are reproducible from the seed") {
  Eigen::VectorXd cur = Eigen::VectorXd::Zero(2);
  const Eigen::VectorXd steps = Eigen::VectorXd::Constant(2, 0.3);
  Rng a(99), b(99);
  for (int i = 0; i < 20; ++i) {
    const Eigen::VectorXd pa = propose(cur, steps, a);
    const Eigen::VectorXd pb = propose(cur, steps, b);
    CHECK((pa - pb).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("proposal law has the configured spread") {
  Rng rng(12345);
  const Eigen::VectorXd cur = Eigen::VectorXd::Zero(1);
  const Eigen::VectorXd steps = Eigen::VectorXd::Constant(1, 0.1);
  const int n = 100000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = propose(cur, steps, rng)[0];
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sumsq / n - mean * mean);
  CHECK(std::abs(mean) < 3.0 * 0.1 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(sd - 0.1) < 0.02 * 0.1);
}

TEST_CASE("log target components sum as expected") {
  Rng rng(77);
  const Eigen::MatrixXd X = testing::random_matrix(3, 2, rng, -1.0, 1.0);
  Eigen::VectorXd y(3);
  y << 0.5, -0.2, 0.1;
  const Dataset data = plain_dataset(X, y);
  const ParamLayout layout{2, true, 0.0};
  PriorSpec spec = PriorSpec::with_defaults(PriorKind::WishartPlusNormal, layout, 5);

  Eigen::VectorXd theta(3);
  theta << 0.2, -0.1, std::log(0.1);
  Eigen::VectorXd theta_v(3);
  theta_v << 0.1, 0.0, std::log(0.1);

  const CovMatrix V = build_kernel_matrix(X, layout.unpack(theta_v), false, 1e-8);
  V.factorize();
  const TargetParts parts = log_target(theta, data, spec, layout, &V, 1e-8);

  const CovMatrix noisy = build_kernel_matrix(X, layout.unpack(theta), true, 1e-8);
  const CovMatrix noise_free = build_kernel_matrix(X, layout.unpack(theta), false, 1e-8);
  const double lik = gp_log_likelihood(y, noisy);
  const double prior = log_marginal_prior(theta, spec);
  const double wish = wishart_log_density(noise_free, V, 5, false);
  CHECK(parts.log_lik == doctest::Approx(lik).epsilon(1e-12));
  CHECK(parts.log_prior == doctest::Approx(prior).epsilon(1e-12));
  CHECK(parts.log_wishart.has_value());
  CHECK(*parts.log_wishart == doctest::Approx(wish).epsilon(1e-12));
  CHECK(parts.total() == doctest::Approx(lik + prior + wish).epsilon(1e-10));
}

TEST_CASE("before switch-on a box prior contributes nothing to the target") {
  Rng rng(78);
  const Eigen::MatrixXd X = testing::random_matrix(3, 1, rng, -1.0, 1.0);
  Eigen::VectorXd y(3);
  y << 0.1, 0.3, -0.5;
  const Dataset data = plain_dataset(X, y);
  const ParamLayout layout{1, false, std::log(0.05)};
  PriorSpec spec = PriorSpec::with_defaults(PriorKind::WishartOnly, layout, 5);

  Eigen::VectorXd theta(1);
  theta << 0.4;
  const TargetParts parts = log_target(theta, data, spec, layout, nullptr, 1e-8);
  const CovMatrix noisy = build_kernel_matrix(X, layout.unpack(theta), true, 1e-8);
  CHECK(parts.log_prior == 0.0);
  CHECK_FALSE(parts.log_wishart.has_value());
  CHECK(parts.total() == doctest::Approx(gp_log_likelihood(y, noisy)).epsilon(1e-12));
}

TEST_CASE("out-of-box hyperparameters have -inf target") {
  Rng rng(79);
  const Eigen::MatrixXd X = testing::random_matrix(3, 1, rng, -1.0, 1.0);
  const Dataset data = plain_dataset(X, Eigen::VectorXd::Zero(3));
  const ParamLayout layout{1, false, std::log(0.05)};
  PriorSpec spec = PriorSpec::with_defaults(PriorKind::WishartOnly, layout, 5);
  Eigen::VectorXd theta(1);
  theta << 9.5;
  CHECK(log_target(theta, data, spec, layout, nullptr, 1e-8).total() == -kInf);
}

TEST_CASE("acceptance probability handles the degenerate cases") {
  CHECK(acceptance_probability(-kInf, -1.0) == 0.0);
  CHECK(acceptance_probability(-1.0, -kInf) == 1.0);
  CHECK(acceptance_probability(-1.0, -1.0) == 1.0);
  CHECK(acceptance_probability(-3.0, -1.0) == doctest::Approx(std::exp(-2.0)));
}

TEST_CASE("identical proposal is always accepted") {
  Rng rng(81);
  const Eigen::MatrixXd X = testing::random_matrix(4, 2, rng, -1.0, 1.0);
  Eigen::VectorXd y(4);
  y << 0.2, -0.1, 0.4, 0.0;
  const Dataset data = plain_dataset(X, y);
  const ParamLayout layout{2, true, 0.0};
  const PriorSpec spec = PriorSpec::with_defaults(PriorKind::NormalOnly, layout);
  SamplerConfig cfg;
  cfg.n_iter = 10;
  cfg.burn_in = 1;
  cfg.step_sds = Eigen::VectorXd::Constant(3, 0.1);
  cfg.seed = 5;

  ChainState state;
  state.theta = Eigen::VectorXd::Zero(3);
  state.parts = log_target(state.theta, data, spec, layout, nullptr, cfg.jitter);
  LookbackBuffer buffer(1);
  Rng step_rng(6);
  const StepResult res =
      mh_step(state, state.theta, data, spec, cfg, layout, 1, buffer, step_rng);
  CHECK(res.row.alpha == 1.0);
  CHECK(res.row.accepted);
}

TEST_CASE("proposal with an unfactorizable induced covariance is rejected") {
  // duplicate design rows + zero jitter make the noise-free matrix singular
  Eigen::MatrixXd X(2, 1);
  X << 0.3, 0.3;
  Eigen::VectorXd y(2);
  y << 0.2, 0.25;
  const Dataset data = plain_dataset(X, y);
  const ParamLayout layout{1, false, std::log(0.1)};
  PriorSpec spec = PriorSpec::with_defaults(PriorKind::WishartOnly, layout, 3);
  SamplerConfig cfg;
  cfg.n_iter = 10;
  cfg.burn_in = 1;
  cfg.window_n = 3;
  cfg.wishart_switch_on = 4;
  cfg.step_sds = Eigen::VectorXd::Constant(1, 0.1);
  cfg.jitter = 0.0;

  ChainState state;
  state.theta = Eigen::VectorXd::Zero(1);
  state.parts = log_target(state.theta, data, spec, layout, nullptr, cfg.jitter);
  LookbackBuffer buffer(2);
  buffer.push(state.theta);
  buffer.push(state.theta);

  Eigen::VectorXd prop(1);
  prop << 0.05;
  Rng rng(9);
  const StepResult res = mh_step(state, prop, data, spec, cfg, layout, 4, buffer, rng);
  CHECK(res.row.alpha == 0.0);
  CHECK_FALSE(res.row.accepted);
  CHECK(res.row.prop_log_wishart.has_value());
  CHECK(*res.row.prop_log_wishart == -kInf);
}

TEST_CASE("two-state acceptance ratio matches the hand computation") {
  Rng rng(83);
  const Eigen::MatrixXd X = testing::random_matrix(3, 2, rng, -1.0, 1.0);
  Eigen::VectorXd y(3);
  y << 0.5, -0.3, 0.2;
  const Dataset data = plain_dataset(X, y);
  const ParamLayout layout{2, false, std::log(0.05)};
  PriorSpec spec = PriorSpec::with_defaults(PriorKind::WishartPlusNormal, layout, 4);
  SamplerConfig cfg;
  cfg.n_iter = 10;
  cfg.burn_in = 1;
  cfg.window_n = 4;
  cfg.wishart_switch_on = 5;
  cfg.step_sds = Eigen::VectorXd::Constant(2, 0.1);

  Eigen::VectorXd cur_theta(2), prop_theta(2);
  cur_theta << 0.1, -0.2;
  prop_theta << 0.3, 0.1;

  LookbackBuffer buffer(3);
  for (int i = 0; i < 3; ++i) {
    Eigen::VectorXd v(2);
    v << 0.05 * i, -0.05 * i;
    buffer.push(v);
  }

  // hand computation through the public pieces
  const CovMatrix V = assemble_scale_matrix(buffer, prop_theta, data.X, layout, cfg.jitter);
  auto parts_at = [&](const Eigen::VectorXd& th) {
    const CovMatrix noisy = build_kernel_matrix(X, layout.unpack(th), true, cfg.jitter);
    const CovMatrix nf = build_kernel_matrix(X, layout.unpack(th), false, cfg.jitter);
    return gp_log_likelihood(y, noisy) + log_marginal_prior(th, spec) +
           wishart_log_density(nf, V, 4, false);
  };
  const double alpha_hand =
      std::min(1.0, std::exp(parts_at(prop_theta) - parts_at(cur_theta)));

  ChainState state;
  state.theta = cur_theta;
  state.parts = log_target(cur_theta, data, spec, layout, nullptr, cfg.jitter);
  LookbackBuffer buffer2(3);
  for (int i = 0; i < 3; ++i) {
    Eigen::VectorXd v(2);
    v << 0.05 * i, -0.05 * i;
    buffer2.push(v);
  }
  Rng rng2(17);
  const StepResult res =
      mh_step(state, prop_theta, data, spec, cfg, layout, 5, buffer2, rng2);
  CHECK(res.row.alpha == doctest::Approx(alpha_hand).epsilon(1e-12));
}

TEST_CASE("NormalOnly chains never carry a Wishart term") {
  const Dataset data = gp_draw_dataset(10, 0.7, 0.05, 1001);
  const ParamLayout layout{1, true, 0.0};
  const PriorSpec spec = PriorSpec::with_defaults(PriorKind::NormalOnly, layout);
  SamplerConfig cfg;
  cfg.n_iter = 50;
  cfg.burn_in = 10;
  cfg.step_sds = Eigen::VectorXd::Constant(2, 0.2);
  cfg.seed = 42;
  const ChainTrace trace = run_chain(data, spec, cfg);
  CHECK(trace.n_iter() == 50);
  for (const auto& row : trace.rows) CHECK_FALSE(row.log_wishart.has_value());
}

TEST_CASE("chains are bit-identical under the same seed") {
  const Dataset data = gp_draw_dataset(8, 0.7, 0.05, 1002);
  const ParamLayout layout{1, false, std::log(0.05)};
  PriorSpec spec = PriorSpec::with_defaults(PriorKind::WishartOnly, layout, 10);
  SamplerConfig cfg;
  cfg.n_iter = 60;
  cfg.burn_in = 10;
  cfg.window_n = 10;
  cfg.wishart_switch_on = 11;
  cfg.learn_noise = false;
  cfg.step_sds = Eigen::VectorXd::Constant(1, 0.15);
  cfg.seed = 77;
  const ChainTrace a = run_chain(data, spec, cfg);
  const ChainTrace b = run_chain(data, spec, cfg);
  REQUIRE(a.n_iter() == b.n_iter());
  for (int t = 0; t < a.n_iter(); ++t) {
    const auto& ra = a.rows[static_cast<std::size_t>(t)];
    const auto& rb = b.rows[static_cast<std::size_t>(t)];
    CHECK((ra.theta - rb.theta).cwiseAbs().maxCoeff() == 0.0);
    CHECK(ra.accepted == rb.accepted);
    CHECK(ra.alpha == rb.alpha);
  }
}

TEST_CASE("rejected iterations retain the previous state exactly") {
  const Dataset data = gp_draw_dataset(10, 0.5, 0.05, 1003);
  const ParamLayout layout{1, true, 0.0};
  const PriorSpec spec = PriorSpec::with_defaults(PriorKind::NormalOnly, layout);
  SamplerConfig cfg;
  cfg.n_iter = 300;
  cfg.burn_in = 10;
  cfg.step_sds = Eigen::VectorXd::Constant(2, 1.5);  // large steps force rejections
  cfg.seed = 7;
  const ChainTrace trace = run_chain(data, spec, cfg);
  int rejects = 0;
  for (int t = 1; t < trace.n_iter(); ++t) {
    const auto& row = trace.rows[static_cast<std::size_t>(t)];
    if (!row.accepted) {
      ++rejects;
      const auto& prev = trace.rows[static_cast<std::size_t>(t - 1)];
      CHECK((row.theta - prev.theta).cwiseAbs().maxCoeff() == 0.0);
    }
    CHECK(row.alpha >= 0.0);
    CHECK(row.alpha <= 1.0);
  }
  CHECK(rejects > 0);
}

TEST_CASE("Wishart factor switches on exactly at the configured iteration") {
  const Dataset data = gp_draw_dataset(6, 0.7, 0.05, 1004);
  const ParamLayout layout{1, false, std::log(0.05)};
  PriorSpec spec = PriorSpec::with_defaults(PriorKind::WishartOnly, layout, 8);
  SamplerConfig cfg;
  cfg.n_iter = 40;
  cfg.burn_in = 20;
  cfg.window_n = 8;
  cfg.wishart_switch_on = 12;
  cfg.learn_noise = false;
  cfg.step_sds = Eigen::VectorXd::Constant(1, 0.1);
  cfg.seed = 3;
  const ChainTrace trace = run_chain(data, spec, cfg);
  for (int t = 1; t <= trace.n_iter(); ++t) {
    const auto& row = trace.rows[static_cast<std::size_t>(t - 1)];
    CHECK(row.log_wishart.has_value() == (t >= 12));
    // drift is recorded from the iteration after switch-on onwards
    CHECK(row.scale_drift.has_value() == (t >= 13));
    if (row.scale_drift) CHECK(std::isfinite(*row.scale_drift));
  }
}

TEST_CASE("buffer mirrors the accepted-state sequence") {
  const Dataset data = gp_draw_dataset(6, 0.7, 0.05, 1005);
  const ParamLayout layout{1, false, std::log(0.05)};
  PriorSpec spec = PriorSpec::with_defaults(PriorKind::WishartOnly, layout, 8);
  SamplerConfig cfg;
  cfg.n_iter = 50;
  cfg.burn_in = 20;
  cfg.window_n = 8;
  cfg.wishart_switch_on = 9;
  cfg.learn_noise = false;
  cfg.step_sds = Eigen::VectorXd::Constant(1, 0.12);
  cfg.seed = 11;

  // replay the trace through a fresh buffer and compare the final windows
  const ChainTrace trace = run_chain(data, spec, cfg);
  LookbackBuffer replay(cfg.window_n - 1);
  for (const auto& row : trace.rows) replay.push(row.theta);
  for (int i = 0; i < replay.capacity(); ++i) {
    const auto& expected =
        trace.rows[static_cast<std::size_t>(trace.n_iter() - replay.capacity() + i)].theta;
    CHECK((replay.entry(i) - expected).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("recorded parts reproduce every acceptance probability") {
  const Dataset data = gp_draw_dataset(8, 0.7, 0.05, 1006);
  const ParamLayout layout{1, false, std::log(0.05)};
  PriorSpec spec = PriorSpec::with_defaults(PriorKind::WishartOnly, layout, 9);
  SamplerConfig cfg;
  cfg.n_iter = 120;
  cfg.burn_in = 30;
  cfg.window_n = 9;
  cfg.wishart_switch_on = 10;
  cfg.learn_noise = false;
  cfg.step_sds = Eigen::VectorXd::Constant(1, 0.15);
  cfg.seed = 13;
  const ChainTrace trace = run_chain(data, spec, cfg);
  for (const auto& row : trace.rows) {
    double prop_total = row.prop_log_lik + row.prop_log_prior;
    if (row.prop_log_wishart) prop_total += *row.prop_log_wishart;
    double cur_total = row.cur_log_lik + row.cur_log_prior;
    if (row.cur_log_wishart) cur_total += *row.cur_log_wishart;
    const double alpha = acceptance_probability(prop_total, cur_total);
    CHECK(row.alpha == doctest::Approx(alpha).epsilon(1e-12));
  }
}

TEST_CASE("posterior mean lengthscale recovers the generating value") {
  // responses drawn from a GP with lengthscale 0.7; the posterior mean should
  // land inside [0.4, 1.2], cross-checked against a dense grid oracle
  const Dataset data = gp_draw_dataset(20, 0.7, 0.05, 2024);
  const ParamLayout layout{1, false, std::log(0.05)};
  const PriorSpec spec = PriorSpec::with_defaults(PriorKind::NormalOnly, layout);
  SamplerConfig cfg;
  cfg.n_iter = 5000;
  cfg.burn_in = 1000;
  cfg.learn_noise = false;
  cfg.fixed_noise_sd = 0.05;
  cfg.step_sds = Eigen::VectorXd::Constant(1, 0.25);
  cfg.seed = 99;
  const ChainTrace trace = run_chain(data, spec, cfg);

  double mean_ls = 0.0;
  int count = 0;
  for (int t = cfg.burn_in; t < cfg.n_iter; ++t) {
    mean_ls += std::exp(trace.rows[static_cast<std::size_t>(t)].theta[0]);
    ++count;
  }
  mean_ls /= count;
  CHECK(mean_ls > 0.4);
  CHECK(mean_ls < 1.2);

  // dense grid over log lengthscale: posterior mean of the lengthscale
  double zsum = 0.0, lsum = 0.0;
  double max_log = -kInf;
  std::vector<double> grid, logpost;
  for (double g = -3.0; g <= 3.0; g += 0.01) {
    Eigen::VectorXd th(1);
    th << g;
    const CovMatrix K = build_kernel_matrix(data.X, layout.unpack(th), true, cfg.jitter);
    const double lp = gp_log_likelihood(data.y, K) + log_marginal_prior(th, spec);
    grid.push_back(g);
    logpost.push_back(lp);
    max_log = std::max(max_log, lp);
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double w = std::exp(logpost[i] - max_log);
    zsum += w;
    lsum += w * std::exp(grid[i]);
  }
  const double grid_mean = lsum / zsum;
  CHECK(std::abs(mean_ls - grid_mean) < 0.15);
}

TEST_CASE("uninformative data recover the prior mean of each log-lengthscale") {
  const Dataset data = uninformative_dataset(2);
  const ParamLayout layout{2, false, std::log(0.05)};
  const PriorSpec spec = PriorSpec::with_defaults(PriorKind::NormalOnly, layout);
  SamplerConfig cfg;
  cfg.n_iter = 25000;
  cfg.burn_in = 2000;
  cfg.learn_noise = false;
  cfg.step_sds = Eigen::VectorXd::Constant(2, 1.0);
  cfg.seed = 314;
  const ChainTrace trace = run_chain(data, spec, cfg);

  for (int k = 0; k < 2; ++k) {
    std::vector<double> chain;
    for (int t = cfg.burn_in; t < cfg.n_iter; ++t) {
      chain.push_back(trace.rows[static_cast<std::size_t>(t)].theta[k]);
    }
    double mean = 0.0;
    for (double v : chain) mean += v;
    mean /= static_cast<double>(chain.size());
    const double se = testing::batch_means_se(chain);
    CHECK(std::abs(mean - 0.0) < 3.0 * se);
  }
}

TEST_CASE("configuration errors surface before iterating") {
  const Dataset data = gp_draw_dataset(6, 0.7, 0.05, 1007);
  const ParamLayout layout{1, false, std::log(0.05)};
  PriorSpec spec = PriorSpec::with_defaults(PriorKind::WishartOnly, layout, 4);
  SamplerConfig cfg;
  cfg.n_iter = 50;
  cfg.burn_in = 10;
  cfg.learn_noise = false;
  cfg.step_sds = Eigen::VectorXd::Constant(1, 0.1);

  cfg.window_n = 4;  // n <= p = 6
  cfg.wishart_switch_on = 5;
  CHECK_THROWS_AS(run_chain(data, spec, cfg), ConfigError);

  spec.wishart_dof = 8;
  cfg.window_n = 8;
  cfg.wishart_switch_on = 8;  // N0 must exceed n
  CHECK_THROWS_AS(run_chain(data, spec, cfg), ConfigError);

  cfg.wishart_switch_on = 9;
  cfg.burn_in = 60;  // burn-in beyond the chain
  CHECK_THROWS_AS(run_chain(data, spec, cfg), ConfigError);
}

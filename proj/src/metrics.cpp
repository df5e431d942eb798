#include "gpwish/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "gpwish/errors.hpp"

namespace gpwish {

namespace {

void check_lengths(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                   const char* what) {
  if (a.size() != b.size() || a.size() == 0) {
    throw ConfigError(std::string(what) + ": prediction/truth length mismatch");
  }
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

double rmse(const Eigen::VectorXd& pred, const Eigen::VectorXd& truth) {
  check_lengths(pred, truth, "rmse");
  return std::sqrt((pred - truth).squaredNorm() / static_cast<double>(pred.size()));
}

double mae(const Eigen::VectorXd& pred, const Eigen::VectorXd& truth) {
  check_lengths(pred, truth, "mae");
  return (pred - truth).cwiseAbs().mean();
}

double interval_coverage(const PredictiveSummary& summary,
                         const Eigen::VectorXd& truth) {
  check_lengths(summary.mean, truth, "interval_coverage");
  int hits = 0;
  for (Eigen::Index i = 0; i < truth.size(); ++i) {
    if (truth[i] >= summary.lo95[i] && truth[i] <= summary.hi95[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

double sigma_coverage(const PredictiveSummary& summary,
                      const Eigen::VectorXd& truth, double k) {
  check_lengths(summary.mean, truth, "sigma_coverage");
  int hits = 0;
  for (Eigen::Index i = 0; i < truth.size(); ++i) {
    if (std::abs(truth[i] - summary.mean[i]) <= k * summary.sd[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

std::optional<double> relevance_ratio(const ChainTrace& trace, int burn_in,
                                      const std::vector<int>& relevant_inputs) {
  const int d = trace.layout.input_dim;
  for (int r : relevant_inputs) {
    if (r < 1 || r > d) {
      throw ConfigError("relevance_ratio: relevant input label out of range");
    }
  }
  if (relevant_inputs.empty() ||
      static_cast<int>(relevant_inputs.size()) >= d) {
    return std::nullopt;
  }
  if (burn_in < 0 || burn_in >= trace.n_iter()) {
    throw ConfigError("relevance_ratio: burn_in out of range");
  }

  // posterior-mean lengthscale per input, on the lengthscale scale
  Eigen::VectorXd mean_ls = Eigen::VectorXd::Zero(d);
  int count = 0;
  for (int t = burn_in; t < trace.n_iter(); ++t) {
    const auto& theta = trace.rows[static_cast<std::size_t>(t)].theta;
    mean_ls += theta.head(d).array().exp().matrix();
    ++count;
  }
  mean_ls /= static_cast<double>(count);

  std::vector<bool> is_relevant(static_cast<std::size_t>(d), false);
  for (int r : relevant_inputs) is_relevant[static_cast<std::size_t>(r - 1)] = true;

  double rel_sum = 0.0, irr_sum = 0.0;
  int rel_n = 0, irr_n = 0;
  for (int q = 0; q < d; ++q) {
    if (is_relevant[static_cast<std::size_t>(q)]) {
      rel_sum += mean_ls[q];
      ++rel_n;
    } else {
      irr_sum += mean_ls[q];
      ++irr_n;
    }
  }
  return (rel_sum / rel_n) / (irr_sum / irr_n);
}

MetricsReport evaluate_run(const ChainTrace& trace, int burn_in,
                           const PredictiveSummary& summary,
                           const Eigen::VectorXd& truth,
                           const std::vector<int>& relevant_inputs) {
  MetricsReport r;
  r.rmse = rmse(summary.mean, truth);
  r.mae = mae(summary.mean, truth);
  r.coverage95 = interval_coverage(summary, truth);
  r.cov_1sigma = sigma_coverage(summary, truth, 1.0);
  r.cov_2sigma = sigma_coverage(summary, truth, 2.0);
  r.relevance_ratio = relevance_ratio(trace, burn_in, relevant_inputs);
  r.acceptance_rate = trace.acceptance_rate();
  return r;
}

std::string MetricsReport::to_key_value() const {
  std::string out;
  out += "rmse=" + fmt_double(rmse) + "\n";
  out += "mae=" + fmt_double(mae) + "\n";
  out += "coverage95=" + fmt_double(coverage95) + "\n";
  out += "cov_1sigma=" + fmt_double(cov_1sigma) + "\n";
  out += "cov_2sigma=" + fmt_double(cov_2sigma) + "\n";
  out += "relevance_ratio=" +
         (relevance_ratio ? fmt_double(*relevance_ratio) : std::string("none")) + "\n";
  out += "acceptance_rate=" + fmt_double(acceptance_rate) + "\n";
  return out;
}

}  // namespace gpwish

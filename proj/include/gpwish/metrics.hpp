#ifndef GPWISH_METRICS_HPP
#define GPWISH_METRICS_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "gpwish/gp.hpp"
#include "gpwish/sampler.hpp"

namespace gpwish {

struct MetricsReport {
  double rmse = 0.0;
  double mae = 0.0;
  double coverage95 = 0.0;
  double cov_1sigma = 0.0;
  double cov_2sigma = 0.0;
  std::optional<double> relevance_ratio;  // absent when relevance is unknown
  double acceptance_rate = 0.0;

  // One key=value line per field.
  std::string to_key_value() const;
};

double rmse(const Eigen::VectorXd& pred, const Eigen::VectorXd& truth);
double mae(const Eigen::VectorXd& pred, const Eigen::VectorXd& truth);

// Fraction of truths inside [lo95, hi95] (inclusive).
double interval_coverage(const PredictiveSummary& summary,
                         const Eigen::VectorXd& truth);

// Fraction of truths inside mean +/- k sd (inclusive).
double sigma_coverage(const PredictiveSummary& summary,
                      const Eigen::VectorXd& truth, double k);

// Mean posterior lengthscale of the relevant inputs over the mean posterior
// lengthscale of the irrelevant ones. Per-dimension posterior means are taken
// on the lengthscale scale (exp of the post-burn-in log chain) first, then
// averaged within each group. relevant_inputs holds 1-based labels; an empty
// or all-covering set leaves the ratio undefined (nullopt).
std::optional<double> relevance_ratio(const ChainTrace& trace, int burn_in,
                                      const std::vector<int>& relevant_inputs);

// All metrics for one completed run.
MetricsReport evaluate_run(const ChainTrace& trace, int burn_in,
                           const PredictiveSummary& summary,
                           const Eigen::VectorXd& truth,
                           const std::vector<int>& relevant_inputs);

}  // namespace gpwish

#endif

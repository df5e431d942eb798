#ifndef GPWISH_DATASET_HPP
#define GPWISH_DATASET_HPP

#include <Eigen/Dense>
#include <vector>

namespace gpwish {

// Standardised training or test block plus the statistics used to
// standardise it. Test blocks carry the *training* statistics, so
// de-standardisation is consistent across the split.
struct Dataset {
  Eigen::MatrixXd X;  // p x d, standardised inputs
  Eigen::VectorXd y;  // p, standardised responses
  Eigen::VectorXd input_means;
  Eigen::VectorXd input_sds;
  double y_mean = 0.0;
  double y_sd = 1.0;
  std::vector<int> relevant_inputs;  // 1-based input labels; empty = unknown

  int n_points() const { return static_cast<int>(X.rows()); }
  int input_dim() const { return static_cast<int>(X.cols()); }

  // p >= 2, d >= 1, all entries finite, all sds strictly positive.
  void validate() const;

  // Back to original response units.
  double destandardise_y(double y_std) const { return y_mean + y_sd * y_std; }
};

// Splits rows of (X_raw, y_raw) by the given index sets, then standardises
// inputs and responses using statistics of the training rows only.
// Column standard deviations use the n-1 denominator and must be nonzero.
std::pair<Dataset, Dataset> standardise_split(
    const Eigen::MatrixXd& X_raw, const Eigen::VectorXd& y_raw,
    const std::vector<int>& train_rows, const std::vector<int>& test_rows,
    const std::vector<int>& relevant_inputs = {});

}  // namespace gpwish

#endif

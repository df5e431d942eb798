#include "gpwish/dataset.hpp"

#include <cmath>
#include <string>

#include "gpwish/errors.hpp"

namespace gpwish {

void Dataset::validate() const {
  if (n_points() < 2) throw ConfigError("dataset needs at least 2 points");
  if (input_dim() < 1) throw ConfigError("dataset needs at least 1 input dimension");
  if (y.size() != X.rows()) throw ConfigError("dataset X/y row mismatch");
  if (!X.allFinite() || !y.allFinite()) {
    throw ConfigError("dataset contains non-finite entries");
  }
  if (input_sds.size() != X.cols() || input_means.size() != X.cols()) {
    throw ConfigError("dataset standardisation statistics have wrong dimension");
  }
  if (!(input_sds.minCoeff() > 0.0) || !(y_sd > 0.0)) {
    throw ConfigError("dataset standard deviations must be strictly positive");
  }
}

namespace {

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& M, const std::vector<int>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), M.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = M.row(rows[i]);
  return out;
}

Eigen::VectorXd take_rows(const Eigen::VectorXd& v, const std::vector<int>& rows) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[rows[i]];
  return out;
}

}  // namespace

std::pair<Dataset, Dataset> standardise_split(
    const Eigen::MatrixXd& X_raw, const Eigen::VectorXd& y_raw,
    const std::vector<int>& train_rows, const std::vector<int>& test_rows,
    const std::vector<int>& relevant_inputs) {
  if (X_raw.rows() != y_raw.size()) throw ConfigError("X/y row count mismatch");
  if (train_rows.size() < 2) throw ConfigError("need at least 2 training rows");
  if (test_rows.empty()) throw ConfigError("need at least 1 test row");
  for (int r : train_rows) {
    if (r < 0 || r >= X_raw.rows()) throw ConfigError("train row index out of range");
  }
  for (int r : test_rows) {
    if (r < 0 || r >= X_raw.rows()) throw ConfigError("test row index out of range");
  }

  const Eigen::MatrixXd X_tr = take_rows(X_raw, train_rows);
  const Eigen::MatrixXd X_te = take_rows(X_raw, test_rows);
  const Eigen::VectorXd y_tr = take_rows(y_raw, train_rows);
  const Eigen::VectorXd y_te = take_rows(y_raw, test_rows);

  const auto n = static_cast<double>(X_tr.rows());
  Eigen::VectorXd means = X_tr.colwise().mean();
  Eigen::VectorXd sds(X_tr.cols());
  for (Eigen::Index c = 0; c < X_tr.cols(); ++c) {
    sds[c] = std::sqrt((X_tr.col(c).array() - means[c]).square().sum() / (n - 1.0));
    if (!(sds[c] > 0.0)) {
      throw ConfigError("training column " + std::to_string(c + 1) +
                        " has zero variance; cannot standardise");
    }
  }
  const double y_mean = y_tr.mean();
  const double y_sd = std::sqrt((y_tr.array() - y_mean).square().sum() / (n - 1.0));
  if (!(y_sd > 0.0)) throw ConfigError("training response has zero variance");

  auto standardise = [&](const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    Dataset d;
    d.X = (X.rowwise() - means.transpose()).array().rowwise() /
          sds.transpose().array();
    d.y = (y.array() - y_mean) / y_sd;
    d.input_means = means;
    d.input_sds = sds;
    d.y_mean = y_mean;
    d.y_sd = y_sd;
    d.relevant_inputs = relevant_inputs;
    return d;
  };

  Dataset train = standardise(X_tr, y_tr);
  Dataset test = standardise(X_te, y_te);
  train.validate();
  if (test.n_points() >= 2) test.validate();
  return {train, test};
}

}  // namespace gpwish

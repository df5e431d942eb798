#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gpwish/errors.hpp"
#include "gpwish/gp.hpp"
#include "gpwish/kernel.hpp"
#include "test_helpers.hpp"

using namespace gpwish;

namespace {

Dataset toy_train(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  Dataset d;
  d.X = X;
  d.y = y;
  d.input_means = Eigen::VectorXd::Zero(X.cols());
  d.input_sds = Eigen::VectorXd::Ones(X.cols());
  d.y_mean = 0.0;
  d.y_sd = 1.0;
  return d;
}

}  // namespace

TEST_CASE("log likelihood of a standard normal at zero") {
  CovMatrix S(Eigen::MatrixXd::Identity(1, 1));
  Eigen::VectorXd y(1);
  y << 0.0;
  const double expected = -0.5 * std::log(2.0 * std::numbers::pi);
  CHECK(gp_log_likelihood(y, S) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("log likelihood of two independent standard normals at one") {
  CovMatrix S(Eigen::MatrixXd::Identity(2, 2));
  Eigen::VectorXd y(2);
  y << 1.0, 1.0;
  const double expected = -std::log(2.0 * std::numbers::pi) - 1.0;
  CHECK(gp_log_likelihood(y, S) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("scaling the response shifts the log likelihood by the quadratic identity") {
  Rng rng(5);
  for (int p : {2, 5, 10}) {
    Eigen::VectorXd y(p);
    for (int i = 0; i < p; ++i) y[i] = rng.normal();
    CovMatrix S(Eigen::MatrixXd::Identity(p, p));
    const double c = 1.7;
    const double drop = gp_log_likelihood(y, S) - gp_log_likelihood(c * y, S);
    CHECK(drop == doctest::Approx((c * c - 1.0) * y.squaredNorm() / 2.0).epsilon(1e-10));
    CHECK(gp_log_likelihood(c * y, S) ==
          doctest::Approx(testing::dense_mvn_logpdf(c * y, S.entries())).epsilon(1e-10));
  }
}

TEST_CASE("log likelihood matches dense evaluation on random SPD instances") {
  Rng rng(17);
  for (int rep = 0; rep < 50; ++rep) {
    const int p = 1 + static_cast<int>(rng.uniform_index(10));
    const Eigen::MatrixXd M = testing::random_spd(p, rng);
    Eigen::VectorXd y(p);
    for (int i = 0; i < p; ++i) y[i] = rng.normal();
    CHECK(gp_log_likelihood(y, CovMatrix(M)) ==
          doctest::Approx(testing::dense_mvn_logpdf(y, M)).epsilon(1e-8));
  }
}

TEST_CASE("prediction interpolates at a coinciding test point when noise vanishes") {
  Eigen::MatrixXd X(3, 1);
  X << -0.5, 0.2, 0.9;
  Eigen::VectorXd y(3);
  y << 0.4, -0.1, 0.7;
  const Dataset train = toy_train(X, y);
  HyperParams hp{Eigen::VectorXd::Zero(1), std::log(1e-6)};
  Eigen::MatrixXd test(1, 1);
  test << 0.2;
  const auto [mean, var] = gp_predict(train, test, hp);
  CHECK(std::abs(mean[0] - (-0.1)) < 1e-3);
  CHECK(var[0] < 1e-4);
}

TEST_CASE("prediction reverts to the prior far from the data") {
  Eigen::MatrixXd X(3, 1);
  X << -0.5, 0.2, 0.9;
  Eigen::VectorXd y(3);
  y << 0.4, -0.1, 0.7;
  const Dataset train = toy_train(X, y);
  HyperParams hp{Eigen::VectorXd::Zero(1), std::log(0.1)};
  Eigen::MatrixXd test(1, 1);
  test << 500.0;
  const auto [mean, var] = gp_predict(train, test, hp);
  CHECK(std::abs(mean[0]) < 1e-10);
  CHECK(var[0] == doctest::Approx(1.0 + 0.01).epsilon(1e-10));
}

TEST_CASE("two-point prediction matches the dense 2x2 oracle") {
  Eigen::MatrixXd X(2, 1);
  X << 0.0, 1.0;
  Eigen::VectorXd y(2);
  y << 1.0, -1.0;
  const Dataset train = toy_train(X, y);
  const double sn = 0.1;
  HyperParams hp{Eigen::VectorXd::Zero(1), std::log(sn)};
  Eigen::MatrixXd test(1, 1);
  test << 0.5;

  // explicit inversion of the 2x2 training covariance
  const double k01 = std::exp(-0.5 * 1.0);
  const double ks = std::exp(-0.5 * 0.25);
  Eigen::Matrix2d K;
  K << 1.0 + sn * sn + 1e-8, k01, k01, 1.0 + sn * sn + 1e-8;
  const Eigen::Matrix2d Kinv = K.inverse();
  Eigen::Vector2d kvec(ks, ks);
  const double mean_oracle = kvec.dot(Kinv * y);
  const double var_oracle = 1.0 + sn * sn - kvec.dot(Kinv * kvec);

  const auto [mean, var] = gp_predict(train, test, hp);
  CHECK(mean[0] == doctest::Approx(mean_oracle).epsilon(1e-10));
  CHECK(var[0] == doctest::Approx(var_oracle).epsilon(1e-10));
}

TEST_CASE("predictive variance never exceeds the prior variance") {
  Rng rng(23);
  const Eigen::MatrixXd X = testing::random_matrix(20, 3, rng, -1.0, 1.0);
  Eigen::VectorXd y(20);
  for (int i = 0; i < 20; ++i) y[i] = rng.normal();
  const Dataset train = toy_train(X, y);
  HyperParams hp{Eigen::VectorXd::Constant(3, -0.2), std::log(0.3)};
  const Eigen::MatrixXd test = testing::random_matrix(40, 3, rng, -2.0, 2.0);
  const auto [mean, var] = gp_predict(train, test, hp);
  const double prior_var = 1.0 + hp.noise_var() + 1e-8;
  for (int j = 0; j < 40; ++j) CHECK(var[j] <= prior_var + 1e-10);
}

TEST_CASE("single-sample mixture reduces exactly to the de-standardised prediction") {
  Eigen::MatrixXd X(4, 2);
  X << 0.1, -0.3, 0.5, 0.8, -0.9, 0.2, 0.3, -0.6;
  Eigen::VectorXd y(4);
  y << 0.2, -0.4, 0.9, 0.1;
  Dataset train = toy_train(X, y);
  train.y_mean = 3.0;
  train.y_sd = 2.0;
  HyperParams hp{Eigen::VectorXd::Zero(2), std::log(0.2)};
  Eigen::MatrixXd test(2, 2);
  test << 0.0, 0.0, 0.4, -0.2;

  const auto [mean, var] = gp_predict(train, test, hp);
  const PredictiveSummary s = mixture_predictive(train, test, {hp});
  for (int j = 0; j < 2; ++j) {
    CHECK(s.mean[j] == 3.0 + 2.0 * mean[j]);
    CHECK(s.sd[j] == 2.0 * std::sqrt(var[j]));
    CHECK(s.lo95[j] < s.mean[j]);
    CHECK(s.hi95[j] > s.mean[j]);
  }
}

TEST_CASE("mixture of identical samples keeps the common spread") {
  Eigen::MatrixXd X(3, 1);
  X << -0.4, 0.1, 0.8;
  Eigen::VectorXd y(3);
  y << 0.3, -0.2, 0.5;
  const Dataset train = toy_train(X, y);
  HyperParams hp{Eigen::VectorXd::Zero(1), std::log(0.15)};
  Eigen::MatrixXd test(1, 1);
  test << 0.6;
  const PredictiveSummary one = mixture_predictive(train, test, {hp});
  const PredictiveSummary two = mixture_predictive(train, test, {hp, hp});
  CHECK(two.sd[0] == one.sd[0]);
  CHECK(two.mean[0] == one.mean[0]);
}

TEST_CASE("mixture combination follows the variance decomposition") {
  Eigen::VectorXd m1(1), m2(1), v0(1);
  m1 << -1.0;
  m2 << 1.0;
  v0 << 0.0;
  const auto [mean, var] = combine_predictions({m1, m2}, {v0, v0});
  CHECK(mean[0] == 0.0);
  CHECK(var[0] == 1.0);
}

TEST_CASE("empty sample set is a configuration error") {
  Eigen::MatrixXd X(2, 1);
  X << 0.0, 1.0;
  Eigen::VectorXd y(2);
  y << 0.0, 1.0;
  const Dataset train = toy_train(X, y);
  CHECK_THROWS_AS(mixture_predictive(train, X, {}), ConfigError);
}

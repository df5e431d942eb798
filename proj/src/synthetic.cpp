#include "gpwish/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "gpwish/errors.hpp"
#include "gpwish/rng.hpp"

namespace gpwish {

namespace {
constexpr double kPi = std::numbers::pi;
}

const std::vector<std::string>& GeneratorSpec::names() {
  static const std::vector<std::string> kNames = {"baseline6", "rel3", "rel9",
                                                  "rel12", "less6"};
  return kNames;
}

GeneratorSpec GeneratorSpec::by_name(const std::string& name) {
  GeneratorSpec spec;
  spec.name = name;
  if (name == "baseline6") {
    spec.relevant_inputs = {1, 3, 5, 8, 11, 14};
  } else if (name == "rel3") {
    spec.relevant_inputs = {1, 6, 12};
  } else if (name == "rel9") {
    spec.relevant_inputs = {1, 2, 4, 5, 7, 9, 11, 13, 15};
  } else if (name == "rel12") {
    spec.relevant_inputs = {1, 2, 3, 4, 5, 6, 8, 9, 10, 11, 13, 14};
  } else if (name == "less6") {
    spec.relevant_inputs = {1, 3, 5, 8, 11, 14};
  } else {
    throw ConfigError("unknown generator '" + name +
                      "' (expected baseline6, rel3, rel9, rel12, or less6)");
  }
  return spec;
}

void GeneratorSpec::validate() const {
  if (dim != 15) throw ConfigError("generator: dim is fixed at 15");
  if (n_train < 2 || n_train >= n_total) {
    throw ConfigError("generator: need 2 <= n_train < n_total");
  }
  if (!(noise_sd >= 0.0)) throw ConfigError("generator: noise_sd must be >= 0");
  for (int r : relevant_inputs) {
    if (r < 1 || r > dim) throw ConfigError("generator: relevant input label out of range");
  }
}

double latent_f(const std::string& name, const Eigen::VectorXd& x) {
  if (x.size() != 15) throw ConfigError("latent_f: expected a 15-vector");
  // 1-based accessor matching the input labels
  auto v = [&x](int q) { return x[q - 1]; };

  if (name == "baseline6") {
    return std::sin(kPi * v(1)) + 0.8 * std::cos(1.4 * kPi * v(3)) +
           0.7 * std::exp(-2.5 * (v(5) + 0.2) * (v(5) + 0.2)) +
           0.6 * v(8) * v(11) - 0.5 * v(14) * v(14) +
           0.4 * std::sin(kPi * (v(1) + v(14))) - 0.35 * v(3) * v(8);
  }
  if (name == "rel3") {
    return 1.0 * std::sin(kPi * v(1)) + 0.9 * std::cos(1.4 * kPi * v(6)) +
           0.7 * std::exp(-2.2 * (v(12) + 0.15) * (v(12) + 0.15));
  }
  if (name == "rel9") {
    return 0.9 * std::sin(kPi * v(1)) + 0.7 * std::cos(1.3 * kPi * v(2)) +
           0.55 * std::exp(-2.0 * (v(4) - 0.2) * (v(4) - 0.2)) + 0.45 * v(5) -
           0.4 * v(7) * v(7) + 0.35 * std::sin(kPi * v(9)) +
           0.3 * v(11) * v(13) + 0.25 * std::cos(kPi * (v(15) + v(1)));
  }
  if (name == "rel12") {
    return 0.7 * std::sin(kPi * v(1)) + 0.55 * std::cos(1.2 * kPi * v(2)) +
           0.45 * v(3) - 0.35 * v(4) * v(4) +
           0.4 * std::exp(-2.0 * (v(5) + 0.1) * (v(5) + 0.1)) +
           0.35 * std::sin(kPi * v(6)) + 0.3 * v(8) * v(9) +
           0.25 * std::cos(kPi * v(10)) - 0.2 * v(11) * v(13) +
           0.2 * std::sin(kPi * (v(14) + v(1)));
  }
  if (name == "less6") {
    return std::sin(kPi * v(1)) + 0.8 * std::cos(1.4 * kPi * v(3)) +
           0.7 * std::exp(-2.5 * (v(5) + 0.2) * (v(5) + 0.2)) + 0.5 * v(8) -
           0.45 * v(11) * v(11) + 0.35 * std::sin(kPi * v(14));
  }
  throw ConfigError("unknown generator '" + name + "'");
}

RawTable generate_raw(const GeneratorSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  RawTable raw;
  raw.X.resize(spec.n_total, spec.dim);
  for (int i = 0; i < spec.n_total; ++i) {
    for (int q = 0; q < spec.dim; ++q) raw.X(i, q) = rng.uniform(-1.0, 1.0);
  }
  raw.y.resize(spec.n_total);
  for (int i = 0; i < spec.n_total; ++i) {
    raw.y[i] = latent_f(spec.name, raw.X.row(i)) + spec.noise_sd * rng.normal();
  }
  return raw;
}

std::pair<std::vector<int>, std::vector<int>> random_split(int n_total,
                                                           int n_train,
                                                           std::uint64_t seed) {
  if (n_train < 1 || n_train >= n_total) {
    throw ConfigError("random_split: need 1 <= n_train < n_total");
  }
  std::vector<int> idx(static_cast<std::size_t>(n_total));
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  rng.shuffle(idx);
  std::vector<int> train(idx.begin(), idx.begin() + n_train);
  std::vector<int> test(idx.begin() + n_train, idx.end());
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {train, test};
}

std::pair<Dataset, Dataset> generate_dataset(const GeneratorSpec& spec,
                                             std::uint64_t seed) {
  const RawTable raw = generate_raw(spec, derive_seed(seed, 1));
  auto [train_rows, test_rows] =
      random_split(spec.n_total, spec.n_train, derive_seed(seed, 2));
  return standardise_split(raw.X, raw.y, train_rows, test_rows,
                           spec.relevant_inputs);
}

}  // namespace gpwish

#ifndef GPWISH_SYNTHETIC_HPP
#define GPWISH_SYNTHETIC_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gpwish/dataset.hpp"

namespace gpwish {

// The five 15-input benchmark generators. Inputs are uniform on [-1,1]^15,
// only the listed (1-based) coordinates enter the latent signal, and the
// response adds N(0, noise_sd^2) observation noise.
struct GeneratorSpec {
  std::string name;                 // baseline6 | rel3 | rel9 | rel12 | less6
  int dim = 15;
  std::vector<int> relevant_inputs; // 1-based
  double noise_sd = 0.05;
  int n_total = 650;
  int n_train = 500;

  static GeneratorSpec by_name(const std::string& name);
  static const std::vector<std::string>& names();

  void validate() const;
};

// Latent signal of the named generator at a 15-vector.
double latent_f(const std::string& name, const Eigen::VectorXd& x);

struct RawTable {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
};

// Draws n_total input rows (uniform per coordinate, row-major order) followed
// by one noise draw per row. Deterministic given the seed.
RawTable generate_raw(const GeneratorSpec& spec, std::uint64_t seed);

// Random n_train / (n_total - n_train) partition of row indices; both sides
// are returned sorted ascending.
std::pair<std::vector<int>, std::vector<int>> random_split(int n_total,
                                                           int n_train,
                                                           std::uint64_t seed);

// Full protocol: raw draw, random split, then standardisation with
// training-set statistics applied to both sides. Deterministic given seed.
std::pair<Dataset, Dataset> generate_dataset(const GeneratorSpec& spec,
                                             std::uint64_t seed);

}  // namespace gpwish

#endif

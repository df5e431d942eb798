#ifndef GPWISH_EXPERIMENT_HPP
#define GPWISH_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gpwish/metrics.hpp"
#include "gpwish/priors.hpp"
#include "gpwish/sampler.hpp"
#include "gpwish/synthetic.hpp"

namespace gpwish {

struct CsvSource {
  std::string path;
  std::vector<std::string> input_columns;
  std::string response_column;
  int n_train = 0;              // one of n_train / train_fraction must be set
  double train_fraction = 0.0;
};

// Per-spec prior settings from the config file. Scalar entries broadcast to
// every coordinate once the parameter count is known.
struct SpecConfig {
  PriorKind kind = PriorKind::NormalOnly;
  std::optional<std::vector<double>> normal_mean;
  std::optional<std::vector<double>> normal_sd;
  std::optional<std::vector<double>> uniform_lo;
  std::optional<std::vector<double>> uniform_hi;
};

// Sampler settings with deferred defaults: window_n = 0 resolves to p + 2,
// wishart_switch_on = 0 to window_n + 1, burn_in = 0 to
// max(n_iter / 5, switch_on + window_n).
struct SamplerSettings {
  int n_iter = 8000;
  int burn_in = 0;
  int wishart_switch_on = 0;
  int window_n = 0;
  double step_sd = 0.08;
  std::vector<double> step_sds;  // overrides step_sd when non-empty
  int thin = 20;
  bool learn_noise = true;
  double fixed_noise_sd = 0.05;
  double jitter = 1e-8;
};

struct ExperimentConfig {
  std::variant<GeneratorSpec, CsvSource> source;
  std::vector<SpecConfig> specs;
  SamplerSettings sampler;
  std::vector<std::uint64_t> seeds;
  std::string output_dir;
  bool report_sigma_coverage = false;

  static ExperimentConfig from_json_file(const std::string& path);
  static ExperimentConfig from_json_text(const std::string& text);
  std::string canonical_json() const;

  // FNV-1a of the canonical JSON; embedded in every output file header.
  std::string config_hash() const;

  void validate() const;
};

struct CellResult {
  std::string spec_name;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;
  MetricsReport metrics;
};

struct StudySummary {
  std::vector<CellResult> cells;
  int n_failed() const;

  // Mean/sd rows per spec over seeds, Table-style.
  std::string format_table(bool sigma_coverage) const;
};

// Resolved per-run inputs for one (spec, seed) cell, exposed for tests.
struct ResolvedStudy {
  Dataset train;
  Dataset test;
  SamplerConfig sampler;  // fully resolved, seed filled per cell
  std::vector<PriorSpec> priors;
  std::vector<std::string> spec_names;
  ParamLayout layout;
};

// Builds datasets and resolves deferred defaults for one master seed. The
// dataset and chain sub-seeds are derived independently from the master seed,
// so every spec sees the same data and the same initial proposal stream.
ResolvedStudy resolve_study(const ExperimentConfig& config, std::uint64_t seed);

// Runs every (spec, seed) cell, writing per-cell artifacts under
// output_dir/<spec>/<seed>/ and a cross-run summary.csv. A failing cell is
// recorded and the remaining cells proceed.
StudySummary run_experiment(const ExperimentConfig& config);

// Synthetic export: raw (pre-standardisation) table in the CSV layout the
// runner ingests, columns x1..x15,y.
void export_synthetic_csv(const GeneratorSpec& spec, std::uint64_t seed,
                          const std::string& path);

}  // namespace gpwish

#endif

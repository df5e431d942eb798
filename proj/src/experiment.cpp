#include "gpwish/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gpwish/csv.hpp"
#include "gpwish/errors.hpp"
#include "gpwish/rng.hpp"
#include "gpwish/trace_io.hpp"

namespace gpwish {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kDatasetTag = 0xDA7A;
constexpr std::uint64_t kSplitTag = 0x5B17;
constexpr std::uint64_t kChainTag = 0xC4A1;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<double> as_double_list(const json& j, const char* what) {
  std::vector<double> out;
  if (j.is_number()) {
    out.push_back(j.get<double>());
  } else if (j.is_array()) {
    for (const auto& e : j) out.push_back(e.get<double>());
  } else {
    throw ConfigError(std::string("config: ") + what + " must be a number or array");
  }
  return out;
}

Eigen::VectorXd broadcast(const std::vector<double>& v, int m, const char* what) {
  if (v.size() == 1) return Eigen::VectorXd::Constant(m, v[0]);
  if (static_cast<int>(v.size()) == m) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), m);
  }
  throw ConfigError(std::string("config: ") + what + " must have 1 or " +
                    std::to_string(m) + " entries");
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: JSON parse error: ") + e.what());
  }

  ExperimentConfig cfg;
  const json& src = j.at("source");
  if (src.contains("generator")) {
    const json& g = src.at("generator");
    GeneratorSpec spec = GeneratorSpec::by_name(g.at("name").get<std::string>());
    if (g.contains("n_total")) spec.n_total = g.at("n_total").get<int>();
    if (g.contains("n_train")) spec.n_train = g.at("n_train").get<int>();
    if (g.contains("noise_sd")) spec.noise_sd = g.at("noise_sd").get<double>();
    cfg.source = spec;
  } else if (src.contains("csv")) {
    const json& c = src.at("csv");
    CsvSource csv;
    csv.path = c.at("path").get<std::string>();
    csv.input_columns = c.at("input_columns").get<std::vector<std::string>>();
    csv.response_column = c.at("response_column").get<std::string>();
    if (c.contains("n_train")) csv.n_train = c.at("n_train").get<int>();
    if (c.contains("train_fraction")) csv.train_fraction = c.at("train_fraction").get<double>();
    cfg.source = csv;
  } else {
    throw ConfigError("config: source must contain 'generator' or 'csv'");
  }

  for (const json& s : j.at("specs")) {
    SpecConfig sc;
    if (s.is_string()) {
      sc.kind = prior_kind_from_name(s.get<std::string>());
    } else {
      sc.kind = prior_kind_from_name(s.at("kind").get<std::string>());
      if (s.contains("normal_mean")) sc.normal_mean = as_double_list(s.at("normal_mean"), "normal_mean");
      if (s.contains("normal_sd")) sc.normal_sd = as_double_list(s.at("normal_sd"), "normal_sd");
      if (s.contains("uniform_lo")) sc.uniform_lo = as_double_list(s.at("uniform_lo"), "uniform_lo");
      if (s.contains("uniform_hi")) sc.uniform_hi = as_double_list(s.at("uniform_hi"), "uniform_hi");
    }
    cfg.specs.push_back(std::move(sc));
  }

  if (j.contains("sampler")) {
    const json& s = j.at("sampler");
    if (s.contains("n_iter")) cfg.sampler.n_iter = s.at("n_iter").get<int>();
    if (s.contains("burn_in")) cfg.sampler.burn_in = s.at("burn_in").get<int>();
    if (s.contains("wishart_switch_on")) cfg.sampler.wishart_switch_on = s.at("wishart_switch_on").get<int>();
    if (s.contains("window_n")) cfg.sampler.window_n = s.at("window_n").get<int>();
    if (s.contains("step_sd")) cfg.sampler.step_sd = s.at("step_sd").get<double>();
    if (s.contains("step_sds")) cfg.sampler.step_sds = s.at("step_sds").get<std::vector<double>>();
    if (s.contains("thin")) cfg.sampler.thin = s.at("thin").get<int>();
    if (s.contains("learn_noise")) cfg.sampler.learn_noise = s.at("learn_noise").get<bool>();
    if (s.contains("fixed_noise_sd")) cfg.sampler.fixed_noise_sd = s.at("fixed_noise_sd").get<double>();
    if (s.contains("jitter")) cfg.sampler.jitter = s.at("jitter").get<double>();
  }

  cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  cfg.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("report_sigma_coverage")) {
    cfg.report_sigma_coverage = j.at("report_sigma_coverage").get<bool>();
  }
  cfg.validate();
  return cfg;
}

void ExperimentConfig::validate() const {
  if (specs.empty()) throw ConfigError("config: need at least one prior spec");
  if (seeds.empty()) throw ConfigError("config: need at least one seed");
  if (output_dir.empty()) throw ConfigError("config: output_dir is required");
  if (const auto* csv = std::get_if<CsvSource>(&source)) {
    if (csv->input_columns.empty()) {
      throw ConfigError("config: csv source needs at least one input column");
    }
    if (csv->response_column.empty()) {
      throw ConfigError("config: csv source needs a response column");
    }
    const bool has_n = csv->n_train > 0;
    const bool has_frac = csv->train_fraction > 0.0;
    if (has_n == has_frac) {
      throw ConfigError("config: csv source needs exactly one of n_train / train_fraction");
    }
    if (has_frac && csv->train_fraction >= 1.0) {
      throw ConfigError("config: train_fraction must be in (0, 1)");
    }
  } else {
    std::get<GeneratorSpec>(source).validate();
  }
}

std::string ExperimentConfig::canonical_json() const {
  json j;
  if (const auto* gen = std::get_if<GeneratorSpec>(&source)) {
    j["source"]["generator"] = {{"name", gen->name},
                                {"n_total", gen->n_total},
                                {"n_train", gen->n_train},
                                {"noise_sd", gen->noise_sd}};
  } else {
    const auto& csv = std::get<CsvSource>(source);
    j["source"]["csv"] = {{"path", csv.path},
                          {"input_columns", csv.input_columns},
                          {"response_column", csv.response_column},
                          {"n_train", csv.n_train},
                          {"train_fraction", csv.train_fraction}};
  }
  j["specs"] = json::array();
  for (const auto& s : specs) {
    json e{{"kind", prior_kind_name(s.kind)}};
    if (s.normal_mean) e["normal_mean"] = *s.normal_mean;
    if (s.normal_sd) e["normal_sd"] = *s.normal_sd;
    if (s.uniform_lo) e["uniform_lo"] = *s.uniform_lo;
    if (s.uniform_hi) e["uniform_hi"] = *s.uniform_hi;
    j["specs"].push_back(std::move(e));
  }
  j["sampler"] = {{"n_iter", sampler.n_iter},
                  {"burn_in", sampler.burn_in},
                  {"wishart_switch_on", sampler.wishart_switch_on},
                  {"window_n", sampler.window_n},
                  {"step_sd", sampler.step_sd},
                  {"step_sds", sampler.step_sds},
                  {"thin", sampler.thin},
                  {"learn_noise", sampler.learn_noise},
                  {"fixed_noise_sd", sampler.fixed_noise_sd},
                  {"jitter", sampler.jitter}};
  j["seeds"] = seeds;
  j["output_dir"] = output_dir;
  j["report_sigma_coverage"] = report_sigma_coverage;
  return j.dump();
}

std::string ExperimentConfig::config_hash() const {
  const std::string s = canonical_json();
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ResolvedStudy resolve_study(const ExperimentConfig& config, std::uint64_t seed) {
  config.validate();
  ResolvedStudy out;

  const std::uint64_t dataset_seed = derive_seed(seed, kDatasetTag);
  if (const auto* gen = std::get_if<GeneratorSpec>(&config.source)) {
    std::tie(out.train, out.test) = generate_dataset(*gen, dataset_seed);
  } else {
    const auto& src = std::get<CsvSource>(config.source);
    CsvTable table = load_csv(src.path, src.input_columns, src.response_column);
    if (table.dropped_rows > 0) {
      std::cerr << "load_csv: dropped " << table.dropped_rows
                << " malformed row(s) from " << src.path << "\n";
    }
    const int rows = static_cast<int>(table.X.rows());
    int n_train = src.n_train;
    if (n_train <= 0) {
      n_train = static_cast<int>(std::llround(src.train_fraction * rows));
      n_train = std::max(2, std::min(n_train, rows - 1));
    }
    if (n_train >= rows) {
      throw ConfigError("config: csv n_train must leave at least one test row");
    }
    auto [train_rows, test_rows] =
        random_split(rows, n_train, derive_seed(dataset_seed, kSplitTag));
    std::tie(out.train, out.test) =
        standardise_split(table.X, table.y, train_rows, test_rows);
  }

  out.layout = ParamLayout{out.train.input_dim(), config.sampler.learn_noise,
                           std::log(config.sampler.fixed_noise_sd)};
  const int m = out.layout.param_count();
  const int p = out.train.n_points();

  SamplerConfig sc;
  sc.n_iter = config.sampler.n_iter;
  sc.window_n = config.sampler.window_n > 0 ? config.sampler.window_n : p + 2;
  sc.wishart_switch_on = config.sampler.wishart_switch_on > 0
                             ? config.sampler.wishart_switch_on
                             : sc.window_n + 1;
  sc.burn_in = config.sampler.burn_in > 0
                   ? config.sampler.burn_in
                   : std::max(config.sampler.n_iter / 5,
                              sc.wishart_switch_on + sc.window_n);
  if (!config.sampler.step_sds.empty()) {
    sc.step_sds = broadcast(config.sampler.step_sds, m, "step_sds");
  } else {
    sc.step_sds = Eigen::VectorXd::Constant(m, config.sampler.step_sd);
  }
  sc.thin = config.sampler.thin;
  sc.learn_noise = config.sampler.learn_noise;
  sc.fixed_noise_sd = config.sampler.fixed_noise_sd;
  sc.jitter = config.sampler.jitter;
  sc.seed = derive_seed(seed, kChainTag);
  out.sampler = sc;

  bool any_wishart = false;
  for (const auto& s : config.specs) {
    PriorSpec prior = PriorSpec::with_defaults(
        s.kind, out.layout,
        s.kind == PriorKind::NormalOnly ? 0 : sc.window_n);
    if (s.normal_mean) prior.normal_mean = broadcast(*s.normal_mean, m, "normal_mean");
    if (s.normal_sd) prior.normal_sd = broadcast(*s.normal_sd, m, "normal_sd");
    if (s.uniform_lo) prior.uniform_lo = broadcast(*s.uniform_lo, m, "uniform_lo");
    if (s.uniform_hi) prior.uniform_hi = broadcast(*s.uniform_hi, m, "uniform_hi");
    prior.validate(m, prior.uses_wishart() ? p : 0);
    any_wishart = any_wishart || prior.uses_wishart();
    out.spec_names.push_back(prior_kind_name(prior.kind));
    out.priors.push_back(std::move(prior));
  }
  sc.validate(m, p, any_wishart);
  return out;
}

int StudySummary::n_failed() const {
  int n = 0;
  for (const auto& c : cells) n += c.failed ? 1 : 0;
  return n;
}

namespace {

struct Moments {
  double mean = 0.0;
  double sd = 0.0;
};

Moments moments(const std::vector<double>& v) {
  Moments m;
  if (v.empty()) return m;
  double s = 0.0;
  for (double x : v) s += x;
  m.mean = s / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - m.mean) * (x - m.mean);
    m.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return m;
}

}  // namespace

std::string StudySummary::format_table(bool sigma_coverage) const {
  std::vector<std::string> spec_order;
  for (const auto& c : cells) {
    bool seen = false;
    for (const auto& s : spec_order) seen = seen || s == c.spec_name;
    if (!seen) spec_order.push_back(c.spec_name);
  }
  std::ostringstream os;
  os << "spec            rmse mean (sd)          mae mean (sd)           ";
  os << (sigma_coverage ? "cov1s/cov2s mean        " : "coverage95 mean (sd)    ");
  os << "relevance mean (sd)\n";
  for (const auto& name : spec_order) {
    std::vector<double> r, a, c95, c1, c2, rel;
    for (const auto& cell : cells) {
      if (cell.failed || cell.spec_name != name) continue;
      r.push_back(cell.metrics.rmse);
      a.push_back(cell.metrics.mae);
      c95.push_back(cell.metrics.coverage95);
      c1.push_back(cell.metrics.cov_1sigma);
      c2.push_back(cell.metrics.cov_2sigma);
      if (cell.metrics.relevance_ratio) rel.push_back(*cell.metrics.relevance_ratio);
    }
    char line[256];
    const Moments mr = moments(r), ma = moments(a), m95 = moments(c95);
    const Moments m1 = moments(c1), m2 = moments(c2), mrel = moments(rel);
    if (sigma_coverage) {
      std::snprintf(line, sizeof(line),
                    "%-15s %.6f (%.6f)   %.6f (%.6f)   %.4f / %.4f         ",
                    name.c_str(), mr.mean, mr.sd, ma.mean, ma.sd, m1.mean, m2.mean);
    } else {
      std::snprintf(line, sizeof(line),
                    "%-15s %.6f (%.6f)   %.6f (%.6f)   %.6f (%.6f)   ",
                    name.c_str(), mr.mean, mr.sd, ma.mean, ma.sd, m95.mean, m95.sd);
    }
    os << line;
    if (rel.empty()) {
      os << "n/a\n";
    } else {
      std::snprintf(line, sizeof(line), "%.6f (%.6f)\n", mrel.mean, mrel.sd);
      os << line;
    }
  }
  return os.str();
}

namespace {

void write_summary_csv(const std::string& path, const std::string& hash,
                       const StudySummary& summary) {
  std::vector<std::string> spec_order;
  for (const auto& c : summary.cells) {
    bool seen = false;
    for (const auto& s : spec_order) seen = seen || s == c.spec_name;
    if (!seen) spec_order.push_back(c.spec_name);
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("run_experiment: cannot write '" + path + "'");
  out << "# config=" << hash << " file=summary\n";
  out << "spec,n_runs,rmse_mean,rmse_sd,mae_mean,mae_sd,coverage95_mean,coverage95_sd,"
         "cov_1sigma_mean,cov_1sigma_sd,cov_2sigma_mean,cov_2sigma_sd,"
         "relevance_ratio_mean,relevance_ratio_sd\n";
  for (const auto& name : spec_order) {
    std::vector<double> r, a, c95, c1, c2, rel;
    for (const auto& cell : summary.cells) {
      if (cell.failed || cell.spec_name != name) continue;
      r.push_back(cell.metrics.rmse);
      a.push_back(cell.metrics.mae);
      c95.push_back(cell.metrics.coverage95);
      c1.push_back(cell.metrics.cov_1sigma);
      c2.push_back(cell.metrics.cov_2sigma);
      if (cell.metrics.relevance_ratio) rel.push_back(*cell.metrics.relevance_ratio);
    }
    const Moments mr = moments(r), ma = moments(a), m95 = moments(c95);
    const Moments m1 = moments(c1), m2 = moments(c2), mrel = moments(rel);
    out << name << ',' << r.size() << ',' << fmt_double(mr.mean) << ','
        << fmt_double(mr.sd) << ',' << fmt_double(ma.mean) << ',' << fmt_double(ma.sd)
        << ',' << fmt_double(m95.mean) << ',' << fmt_double(m95.sd) << ','
        << fmt_double(m1.mean) << ',' << fmt_double(m1.sd) << ','
        << fmt_double(m2.mean) << ',' << fmt_double(m2.sd) << ',';
    if (rel.empty()) {
      out << ",\n";
    } else {
      out << fmt_double(mrel.mean) << ',' << fmt_double(mrel.sd) << "\n";
    }
  }
}

}  // namespace

StudySummary run_experiment(const ExperimentConfig& config) {
  config.validate();
  const std::string hash = config.config_hash();
  fs::create_directories(config.output_dir);

  StudySummary summary;
  for (std::uint64_t seed : config.seeds) {
    ResolvedStudy study = resolve_study(config, seed);
    const Eigen::VectorXd truth =
        (study.test.y.array() * study.test.y_sd + study.test.y_mean).matrix();

    for (std::size_t si = 0; si < study.priors.size(); ++si) {
      CellResult cell;
      cell.spec_name = study.spec_names[si];
      cell.seed = seed;
      const fs::path cell_dir =
          fs::path(config.output_dir) / cell.spec_name / std::to_string(seed);
      try {
        fs::create_directories(cell_dir);
        const std::string provenance = "config=" + hash + " seed=" +
                                       std::to_string(seed) +
                                       " spec=" + cell.spec_name;

        ChainTrace trace = run_chain(study.train, study.priors[si], study.sampler);
        const auto samples =
            trace.posterior_samples(study.sampler.burn_in, study.sampler.thin);
        const PredictiveSummary pred = mixture_predictive(
            study.train, study.test.X, samples, study.sampler.jitter);
        cell.metrics = evaluate_run(trace, study.sampler.burn_in, pred, truth,
                                    study.train.relevant_inputs);

        write_trace_csv((cell_dir / "trace.csv").string(), provenance, trace);
        {
          Eigen::MatrixXd pm(truth.size(), 6);
          for (Eigen::Index i = 0; i < truth.size(); ++i) {
            pm.row(i) << static_cast<double>(i + 1), truth[i], pred.mean[i],
                pred.sd[i], pred.lo95[i], pred.hi95[i];
          }
          write_csv((cell_dir / "predictions.csv").string(), provenance,
                    {"index", "truth", "mean", "sd", "lo95", "hi95"}, pm);
        }
        {
          std::ofstream mout(cell_dir / "metrics.txt");
          mout << "# " << provenance << "\n" << cell.metrics.to_key_value();
        }
        emit_plot_data(trace, pred, truth, cell_dir.string(), provenance);
      } catch (const std::exception& e) {
        cell.failed = true;
        cell.error = e.what();
        std::cerr << "cell " << cell.spec_name << "/" << seed
                  << " failed: " << e.what() << "\n";
      }
      summary.cells.push_back(std::move(cell));
    }
  }

  write_summary_csv((fs::path(config.output_dir) / "summary.csv").string(), hash,
                    summary);
  if (summary.n_failed() > 0) {
    std::ofstream fout(fs::path(config.output_dir) / "failures.csv");
    fout << "# config=" << hash << " file=failures\nspec,seed,error\n";
    for (const auto& c : summary.cells) {
      if (c.failed) fout << c.spec_name << ',' << c.seed << ",\"" << c.error << "\"\n";
    }
  }
  return summary;
}

void export_synthetic_csv(const GeneratorSpec& spec, std::uint64_t seed,
                          const std::string& path) {
  const RawTable raw = generate_raw(spec, derive_seed(derive_seed(seed, kDatasetTag), 1));
  std::vector<std::string> cols;
  for (int q = 1; q <= spec.dim; ++q) cols.push_back("x" + std::to_string(q));
  cols.push_back("y");
  Eigen::MatrixXd table(raw.X.rows(), raw.X.cols() + 1);
  table.leftCols(raw.X.cols()) = raw.X;
  table.col(raw.X.cols()) = raw.y;
  write_csv(path, "generator=" + spec.name + " seed=" + std::to_string(seed), cols,
            table);
}

}  // namespace gpwish

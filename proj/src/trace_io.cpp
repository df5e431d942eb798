#include "gpwish/trace_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "gpwish/errors.hpp"

namespace gpwish {

namespace {

void append_double(std::string& line, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  line += buf;
}

void append_optional(std::string& line, const std::optional<double>& v) {
  if (v) append_double(line, *v);
}

}  // namespace

std::vector<std::string> trace_columns(const ParamLayout& layout) {
  std::vector<std::string> cols = {"iteration", "accepted"};
  for (int q = 1; q <= layout.input_dim; ++q) {
    cols.push_back("log_ls" + std::to_string(q));
  }
  if (layout.learn_noise) cols.push_back("log_noise_sd");
  cols.insert(cols.end(), {"log_lik", "log_prior", "log_wishart", "alpha", "scale_drift"});
  return cols;
}

void write_trace_csv(const std::string& path, const std::string& provenance,
                     const ChainTrace& trace) {
  std::ofstream out(path);
  if (!out) throw ConfigError("write_trace_csv: cannot open '" + path + "'");
  if (!provenance.empty()) out << "# " << provenance << "\n";

  const auto cols = trace_columns(trace.layout);
  for (std::size_t j = 0; j < cols.size(); ++j) {
    out << cols[j] << (j + 1 < cols.size() ? "," : "\n");
  }
  for (int t = 1; t <= trace.n_iter(); ++t) {
    const TraceRow& r = trace.rows[static_cast<std::size_t>(t - 1)];
    std::string line = std::to_string(t);
    line += ',';
    line += r.accepted ? '1' : '0';
    for (Eigen::Index k = 0; k < r.theta.size(); ++k) {
      line += ',';
      append_double(line, r.theta[k]);
    }
    line += ',';
    append_double(line, r.log_lik);
    line += ',';
    append_double(line, r.log_prior);
    line += ',';
    append_optional(line, r.log_wishart);
    line += ',';
    append_double(line, r.alpha);
    line += ',';
    append_optional(line, r.scale_drift);
    out << line << "\n";
  }
  if (!out) throw ConfigError("write_trace_csv: failed while writing '" + path + "'");
}

void emit_plot_data(const ChainTrace& trace, const PredictiveSummary& summary,
                    const Eigen::VectorXd& truth, const std::string& output_dir,
                    const std::string& provenance) {
  namespace fs = std::filesystem;
  fs::create_directories(output_dir);
  const int d = trace.layout.input_dim;

  {
    std::ofstream out(fs::path(output_dir) / "plot-lengthscales.csv");
    if (!out) throw ConfigError("emit_plot_data: cannot write lengthscale file");
    if (!provenance.empty()) out << "# " << provenance << "\n";
    std::string header = "iteration";
    for (int q = 1; q <= d; ++q) header += ",ls" + std::to_string(q);
    out << header << "\n";
    for (int t = 1; t <= trace.n_iter(); ++t) {
      std::string line = std::to_string(t);
      const auto& theta = trace.rows[static_cast<std::size_t>(t - 1)].theta;
      for (int q = 0; q < d; ++q) {
        line += ',';
        append_double(line, std::exp(theta[q]));
      }
      out << line << "\n";
    }
  }
  {
    std::ofstream out(fs::path(output_dir) / "plot-predictions.csv");
    if (!out) throw ConfigError("emit_plot_data: cannot write prediction file");
    if (!provenance.empty()) out << "# " << provenance << "\n";
    out << "index,truth,mean,lo95,hi95\n";
    for (Eigen::Index i = 0; i < truth.size(); ++i) {
      std::string line = std::to_string(i + 1);
      for (double v : {truth[i], summary.mean[i], summary.lo95[i], summary.hi95[i]}) {
        line += ',';
        append_double(line, v);
      }
      out << line << "\n";
    }
  }
  {
    std::ofstream out(fs::path(output_dir) / "plot-pred-vs-true.csv");
    if (!out) throw ConfigError("emit_plot_data: cannot write scatter file");
    if (!provenance.empty()) out << "# " << provenance << "\n";
    out << "truth,mean\n";
    for (Eigen::Index i = 0; i < truth.size(); ++i) {
      std::string line;
      append_double(line, truth[i]);
      line += ',';
      append_double(line, summary.mean[i]);
      out << line << "\n";
    }
  }
}

}  // namespace gpwish

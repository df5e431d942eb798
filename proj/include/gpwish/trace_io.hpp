#ifndef GPWISH_TRACE_IO_HPP
#define GPWISH_TRACE_IO_HPP

#include <string>

#include "gpwish/gp.hpp"
#include "gpwish/sampler.hpp"

namespace gpwish {

// Column names of the trace file: iteration, accepted, the m hyperparameter
// coordinates (log scale), log_lik, log_prior, log_wishart, alpha,
// scale_drift. Optional fields serialize as empty cells.
std::vector<std::string> trace_columns(const ParamLayout& layout);

void write_trace_csv(const std::string& path, const std::string& provenance,
                     const ChainTrace& trace);

// Plot-ready companions for one run: lengthscale chains (iteration plus one
// column per input, lengthscale scale), predictions by test index
// (index, truth, mean, lo95, hi95), and predicted-versus-true pairs.
void emit_plot_data(const ChainTrace& trace, const PredictiveSummary& summary,
                    const Eigen::VectorXd& truth, const std::string& output_dir,
                    const std::string& provenance);

}  // namespace gpwish

#endif

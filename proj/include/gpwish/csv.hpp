#ifndef GPWISH_CSV_HPP
#define GPWISH_CSV_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace gpwish {

// Numeric block extracted from a CSV file: the requested input columns in
// declaration order plus the response column. Rows with a missing or
// non-numeric field in any selected column are dropped and counted.
struct CsvTable {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  std::vector<std::string> input_columns;
  std::string response_column;
  int dropped_rows = 0;
};

// Parses a comma-separated file with a single header line. Lines starting
// with '#' are metadata and are skipped. Decimal-point numeric parsing only
// (locale independent). Throws ConfigError on a missing file, a missing
// column, or zero usable rows.
CsvTable load_csv(const std::string& path,
                  const std::vector<std::string>& input_columns,
                  const std::string& response_column);

// Writes header + rows with %.17g formatting so values round-trip exactly.
// An optional '#'-prefixed provenance line is emitted before the header.
void write_csv(const std::string& path, const std::string& provenance,
               const std::vector<std::string>& columns,
               const Eigen::MatrixXd& values);

}  // namespace gpwish

#endif

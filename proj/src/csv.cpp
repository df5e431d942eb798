#include "gpwish/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gpwish/errors.hpp"

namespace gpwish {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// std::from_chars: decimal point only, no locale involvement.
bool parse_double(const std::string& s, double& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

CsvTable load_csv(const std::string& path,
                  const std::vector<std::string>& input_columns,
                  const std::string& response_column) {
  if (input_columns.empty()) throw ConfigError("load_csv: need at least one input column");
  for (const auto& c : input_columns) {
    if (c == response_column) {
      throw ConfigError("load_csv: response column '" + c + "' also listed as input");
    }
  }
  std::ifstream in(path);
  if (!in) throw ConfigError("load_csv: cannot open '" + path + "'");

  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    header = split_fields(line);
    for (auto& h : header) h = trim(h);
    break;
  }
  if (header.empty()) throw ConfigError("load_csv: '" + path + "' has no header line");

  auto column_index = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw ConfigError("load_csv: column '" + name + "' not found in '" + path + "'");
    }
    return static_cast<int>(it - header.begin());
  };
  std::vector<int> in_idx;
  for (const auto& c : input_columns) in_idx.push_back(column_index(c));
  const int y_idx = column_index(response_column);

  std::vector<std::vector<double>> rows;
  int dropped = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_fields(line);
    std::vector<double> row(in_idx.size() + 1);
    bool ok = true;
    for (std::size_t j = 0; j < in_idx.size() && ok; ++j) {
      ok = static_cast<std::size_t>(in_idx[j]) < fields.size() &&
           parse_double(fields[static_cast<std::size_t>(in_idx[j])], row[j]);
    }
    ok = ok && static_cast<std::size_t>(y_idx) < fields.size() &&
         parse_double(fields[static_cast<std::size_t>(y_idx)], row.back());
    if (ok) {
      rows.push_back(std::move(row));
    } else {
      ++dropped;
    }
  }
  if (rows.empty()) {
    throw ConfigError("load_csv: '" + path + "' has no usable data rows");
  }

  CsvTable table;
  table.input_columns = input_columns;
  table.response_column = response_column;
  table.dropped_rows = dropped;
  table.X.resize(static_cast<Eigen::Index>(rows.size()),
                 static_cast<Eigen::Index>(input_columns.size()));
  table.y.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < input_columns.size(); ++j) {
      table.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    table.y[static_cast<Eigen::Index>(i)] = rows[i].back();
  }
  return table;
}

void write_csv(const std::string& path, const std::string& provenance,
               const std::vector<std::string>& columns,
               const Eigen::MatrixXd& values) {
  if (values.cols() != static_cast<Eigen::Index>(columns.size())) {
    throw ConfigError("write_csv: column count mismatch");
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("write_csv: cannot open '" + path + "' for writing");
  if (!provenance.empty()) out << "# " << provenance << "\n";
  for (std::size_t j = 0; j < columns.size(); ++j) {
    out << columns[j] << (j + 1 < columns.size() ? "," : "\n");
  }
  char buf[40];
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", values(i, j));
      out << buf << (j + 1 < values.cols() ? "," : "\n");
    }
  }
  if (!out) throw ConfigError("write_csv: failed while writing '" + path + "'");
}

}  // namespace gpwish

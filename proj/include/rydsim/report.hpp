#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace rydsim {

// Fixed scientific notation with 12 significant digits ('.' decimal
// separator, C locale).  All data files go through this one formatter so
// repeated runs are byte-identical.
std::string format_sci(double value);

// Numeric table written as UTF-8 CSV with a header row.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
  void validate() const;  // consistent width, finite entries
};

void write_csv(const CsvTable& table, const std::string& path);
// Same table as a JSON document {"columns": [...], "rows": [[...], ...]}.
void write_table_json(const CsvTable& table, const std::string& path);
CsvTable read_csv(const std::string& path);

// Machine-readable run summary: scenario echo, named scalar metrics, and a
// provenance block (tool version, integrator tolerances).
struct MetricsReport {
  std::string scenario;
  std::map<std::string, std::string> parameters;  // input echo (strings)
  std::map<std::string, double> metrics;          // named scalars, all finite
  double rtol = 0.0;
  double atol = 0.0;
  std::string tool_version;

  void validate() const;
  nlohmann::ordered_json to_json() const;
  static MetricsReport from_json(const nlohmann::ordered_json& j);
};

void write_metrics(const MetricsReport& report, const std::string& path);
MetricsReport read_metrics(const std::string& path);

// Create the directory (and parents) if needed; IoError on failure.
void ensure_directory(const std::string& dir);

}  // namespace rydsim

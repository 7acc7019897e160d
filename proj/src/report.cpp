#include "rydsim/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rydsim/errors.hpp"
#include "rydsim/version.hpp"

namespace rydsim {

std::string format_sci(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.11e", value);
  return buf;
}

void CsvTable::add_row(std::vector<double> row) { rows.push_back(std::move(row)); }

void CsvTable::validate() const {
  if (columns.empty()) throw ValidationError("CsvTable: no columns");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != columns.size())
      throw ValidationError("CsvTable: row " + std::to_string(r) + " width mismatch");
    for (double v : rows[r])
      if (!std::isfinite(v)) throw ValidationError("CsvTable: non-finite entry in row " + std::to_string(r));
  }
}

void write_csv(const CsvTable& table, const std::string& path) {
  table.validate();
  std::ofstream out(path, std::ios::binary);  // binary: no platform newline translation
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  for (std::size_t c = 0; c < table.columns.size(); ++c)
    out << (c ? "," : "") << table.columns[c];
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_sci(row[c]);
    out << "\n";
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

void write_table_json(const CsvTable& table, const std::string& path) {
  table.validate();
  nlohmann::ordered_json j;
  j["columns"] = table.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    auto jr = nlohmann::ordered_json::array();
    for (double v : row) jr.push_back(format_sci(v));  // same formatting as CSV
    rows.push_back(jr);
  }
  j["rows"] = rows;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << j.dump(2) << "\n";
  if (!out) throw IoError("write failed for '" + path + "'");
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  CsvTable table;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
  };
  if (!std::getline(in, line)) throw IoError("empty CSV '" + path + "'");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  table.columns = split(line);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& cell : split(line)) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw IoError(path + ":" + std::to_string(lineno) + ": not a number '" + cell + "'");
      }
    }
    table.add_row(std::move(row));
  }
  table.validate();
  return table;
}

void MetricsReport::validate() const {
  if (scenario.empty()) throw ValidationError("MetricsReport: empty scenario id");
  if (tool_version.empty()) throw ValidationError("MetricsReport: missing tool version");
  if (!(rtol > 0.0) || !(atol > 0.0)) throw ValidationError("MetricsReport: missing integrator tolerances");
  for (const auto& [key, value] : metrics)
    if (!std::isfinite(value)) throw ValidationError("MetricsReport: metric '" + key + "' is not finite");
}

nlohmann::ordered_json MetricsReport::to_json() const {
  validate();
  nlohmann::ordered_json j;
  j["scenario"] = scenario;
  j["provenance"] = {{"tool", kToolName}, {"version", tool_version}, {"rtol", rtol}, {"atol", atol}};
  j["parameters"] = parameters;
  nlohmann::ordered_json m;
  for (const auto& [key, value] : metrics) m[key] = value;
  j["metrics"] = m;
  return j;
}

MetricsReport MetricsReport::from_json(const nlohmann::ordered_json& j) {
  MetricsReport r;
  try {
    r.scenario = j.at("scenario").get<std::string>();
    const auto& prov = j.at("provenance");
    r.tool_version = prov.at("version").get<std::string>();
    r.rtol = prov.at("rtol").get<double>();
    r.atol = prov.at("atol").get<double>();
    if (j.contains("parameters"))
      for (const auto& [key, value] : j.at("parameters").items()) r.parameters[key] = value.get<std::string>();
    for (const auto& [key, value] : j.at("metrics").items()) r.metrics[key] = value.get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("metrics JSON schema violation: ") + e.what());
  }
  r.validate();
  return r;
}

void write_metrics(const MetricsReport& report, const std::string& path) {
  const auto j = report.to_json();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << j.dump(2) << "\n";
  if (!out) throw IoError("write failed for '" + path + "'");
}

MetricsReport read_metrics(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  nlohmann::ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("cannot parse '" + path + "': " + e.what());
  }
  return MetricsReport::from_json(j);
}

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
}

}  // namespace rydsim

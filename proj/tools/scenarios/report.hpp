#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "scenarios/config.hpp"

namespace warplab::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kArtifactVersion = "1.0.0";

// Relation "<=" passes when value <= tolerance, ">=" when value >= tolerance;
// ">" marks a negative control that passes when the value exceeds the threshold.
struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  std::string relation = "<=";
  bool pass = false;
  std::string anchor;
};

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct RunReport {
  std::string scenario;
  std::string anchor;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<Check> checks;
  std::vector<std::pair<std::string, double>> metrics;  // informational, no verdict
  std::vector<Table> tables;
  unsigned long seed = 0;
  double wall_clock = 0.0;

  void require_at_most(const std::string& name, double value, double tolerance, const std::string& anchor);
  void require_at_least(const std::string& name, double value, double bound, const std::string& anchor);
  void require_above(const std::string& name, double value, double threshold, const std::string& anchor);
  void metric(const std::string& name, double value) { metrics.emplace_back(name, value); }
  bool passed() const;
  const Check* check(const std::string& name) const;
};

void record_config(RunReport& r, const Config& c);

nlohmann::ordered_json to_json(const RunReport& r);
RunReport report_from_json(const nlohmann::ordered_json& j);

// Header row plus one line per row, values in %.17g.
std::string table_csv(const Table& t);

// <dir>/<scenario>.json and <dir>/<scenario>.<table>.csv. Returns the paths written.
std::vector<std::filesystem::path> emit(const RunReport& r, const std::filesystem::path& dir);

}  // namespace warplab::cli

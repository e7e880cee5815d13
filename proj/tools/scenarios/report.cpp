#include "scenarios/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace warplab::cli {

using nlohmann::ordered_json;

namespace {
// JSON has no NaN; undefined entries (e.g. a slope before two points) are null.
ordered_json number(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }
double from_number(const ordered_json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}
}  // namespace

void RunReport::require_at_most(const std::string& name, double value, double tolerance,
                                const std::string& anchor_text) {
  checks.push_back({name, value, tolerance, "<=", value <= tolerance, anchor_text});
}

void RunReport::require_at_least(const std::string& name, double value, double bound,
                                 const std::string& anchor_text) {
  checks.push_back({name, value, bound, ">=", value >= bound, anchor_text});
}

void RunReport::require_above(const std::string& name, double value, double threshold,
                              const std::string& anchor_text) {
  checks.push_back({name, value, threshold, ">", value > threshold, anchor_text});
}

bool RunReport::passed() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

const Check* RunReport::check(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

void record_config(RunReport& r, const Config& c) {
  r.config.clear();
  for (const auto& p : c.params()) r.config.emplace_back(p.key, p.value);
}

ordered_json to_json(const RunReport& r) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["artifact_version"] = kArtifactVersion;
  j["scenario"] = r.scenario;
  j["anchor"] = r.anchor;
  j["seed"] = r.seed;
  j["passed"] = r.passed();
  ordered_json cfg = ordered_json::object();
  for (const auto& [k, v] : r.config) cfg[k] = v;
  j["config"] = cfg;
  ordered_json checks = ordered_json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"value", number(c.value)},
                      {"tolerance", c.tolerance},
                      {"relation", c.relation},
                      {"pass", c.pass},
                      {"anchor", c.anchor}});
  j["checks"] = checks;
  ordered_json metrics = ordered_json::object();
  for (const auto& [k, v] : r.metrics) metrics[k] = number(v);
  j["metrics"] = metrics;
  ordered_json tables = ordered_json::array();
  for (const auto& t : r.tables) {
    ordered_json rows = ordered_json::array();
    for (const auto& row : t.rows) {
      ordered_json jr = ordered_json::array();
      for (double v : row) jr.push_back(number(v));
      rows.push_back(jr);
    }
    tables.push_back({{"name", t.name}, {"columns", t.columns}, {"rows", rows}});
  }
  j["tables"] = tables;
  j["wall_clock_seconds"] = r.wall_clock;
  return j;
}

RunReport report_from_json(const ordered_json& j) {
  if (j.at("schema_version").get<int>() != kSchemaVersion) throw std::runtime_error("unsupported report schema");
  RunReport r;
  r.scenario = j.at("scenario").get<std::string>();
  r.anchor = j.at("anchor").get<std::string>();
  r.seed = j.at("seed").get<unsigned long>();
  for (const auto& [k, v] : j.at("config").items()) r.config.emplace_back(k, v.get<std::string>());
  for (const auto& c : j.at("checks"))
    r.checks.push_back({c.at("name").get<std::string>(), from_number(c.at("value")),
                        c.at("tolerance").get<double>(), c.at("relation").get<std::string>(),
                        c.at("pass").get<bool>(), c.at("anchor").get<std::string>()});
  for (const auto& [k, v] : j.at("metrics").items()) r.metrics.emplace_back(k, from_number(v));
  for (const auto& t : j.at("tables")) {
    Table tab;
    tab.name = t.at("name").get<std::string>();
    tab.columns = t.at("columns").get<std::vector<std::string>>();
    for (const auto& row : t.at("rows")) {
      std::vector<double> vals;
      for (const auto& v : row) vals.push_back(from_number(v));
      tab.rows.push_back(vals);
    }
    r.tables.push_back(tab);
  }
  r.wall_clock = j.at("wall_clock_seconds").get<double>();
  return r;
}

std::string table_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += "\n";
  char buf[32];
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (std::isfinite(row[i])) std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      else std::snprintf(buf, sizeof buf, "nan");
      out += (i ? "," : "") + std::string(buf);
    }
    out += "\n";
  }
  return out;
}

std::vector<std::filesystem::path> emit(const RunReport& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  auto write = [&](const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + p.string());
    written.push_back(p);
  };
  write(dir / (r.scenario + ".json"), to_json(r).dump(2) + "\n");
  for (const auto& t : r.tables) write(dir / (r.scenario + "." + t.name + ".csv"), table_csv(t));
  return written;
}

}  // namespace warplab::cli

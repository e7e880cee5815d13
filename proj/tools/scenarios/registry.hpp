#pragma once

#include <functional>
#include <string>
#include <vector>

#include "scenarios/config.hpp"
#include "scenarios/report.hpp"

namespace warplab::cli {

// What a sweep over one parameter is expected to show for the sweep metric.
struct SweepClaim {
  enum class Kind { NonincreasingInValue, NondecreasingInValue, MinSlope };
  std::string param;
  Kind kind = Kind::NonincreasingInValue;
  double slope = 0.0;  // MinSlope only
};

struct Scenario {
  std::string name;
  std::string anchor;
  std::function<void(Config&)> declare;
  std::function<void(const Config&, RunReport&)> run;
  std::vector<std::string> sweepable;
  std::string sweep_metric;  // check or metric name tracked across a sweep
  std::vector<SweepClaim> claims;
};

const std::vector<Scenario>& registry();
// Throws ConfigError naming the scenario when it is not registered.
const Scenario& find_scenario(const std::string& name);

// Fresh config with the scenario's keys plus "seed".
Config scenario_config(const Scenario& s);

// Declares nothing; runs with a resolved config and fills scenario, anchor,
// config, seed and wall-clock.
RunReport run_scenario(const Scenario& s, const Config& c);

// Value of a named check or metric in a report; NaN when absent.
double report_value(const RunReport& r, const std::string& name);

struct SweepResult {
  std::vector<RunReport> runs;
  RunReport summary;  // table "sweep", fitted slope, claim checks
};

SweepResult sweep(const Scenario& s, const Config& base, const std::string& param,
                  const std::vector<std::string>& values);

// Registration hooks, one per scenario family.
void add_measurement_scenarios(std::vector<Scenario>& out);
void add_deform_scenarios(std::vector<Scenario>& out);
void add_field_scenarios(std::vector<Scenario>& out);
void add_equilibrium_scenarios(std::vector<Scenario>& out);

}  // namespace warplab::cli

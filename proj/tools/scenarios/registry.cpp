#include "scenarios/registry.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "warplab/star.hpp"

namespace warplab::cli {

namespace {

const std::vector<std::string> kOrder = {
    "theorem1",    "measured-observable", "sequential",      "minimal-coupling", "landau",
    "smearing-scale", "joint-measurability", "star-product", "product-compat", "classical-limit",
    "gauge",       "maxwell",             "liouvillian",     "potential"};

std::vector<Scenario> build_registry() {
  std::vector<Scenario> all;
  add_deform_scenarios(all);
  add_measurement_scenarios(all);
  add_field_scenarios(all);
  add_equilibrium_scenarios(all);
  std::vector<Scenario> ordered;
  for (const auto& name : kOrder) {
    const auto n = std::count_if(all.begin(), all.end(), [&](const Scenario& s) { return s.name == name; });
    if (n != 1) throw std::logic_error("scenario must be registered exactly once: " + name);
    ordered.push_back(*std::find_if(all.begin(), all.end(), [&](const Scenario& s) { return s.name == name; }));
  }
  if (ordered.size() != all.size()) throw std::logic_error("unexpected scenario in registry");
  return ordered;
}

// Residuals below this are roundoff and compare as equal.
constexpr double kRefinementFloor = 1e-12;

}  // namespace

const std::vector<Scenario>& registry() {
  static const std::vector<Scenario> reg = build_registry();
  return reg;
}

const Scenario& find_scenario(const std::string& name) {
  for (const auto& s : registry())
    if (s.name == name) return s;
  throw ConfigError("unknown scenario '" + name + "' (see `warplab list`)");
}

Config scenario_config(const Scenario& s) {
  Config c;
  c.declare("seed", ValueType::Integer, "1", "seed of the single generator passed to every corpus");
  s.declare(c);
  return c;
}

RunReport run_scenario(const Scenario& s, const Config& c) {
  RunReport r;
  r.scenario = s.name;
  r.anchor = s.anchor;
  r.seed = c.seed();
  const auto t0 = std::chrono::steady_clock::now();
  s.run(c, r);
  r.wall_clock = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  record_config(r, c);
  return r;
}

double report_value(const RunReport& r, const std::string& name) {
  if (const Check* c = r.check(name)) return c->value;
  for (const auto& [k, v] : r.metrics)
    if (k == name) return v;
  return std::numeric_limits<double>::quiet_NaN();
}

SweepResult sweep(const Scenario& s, const Config& base, const std::string& param,
                  const std::vector<std::string>& values) {
  if (std::find(s.sweepable.begin(), s.sweepable.end(), param) == s.sweepable.end())
    throw ConfigError("parameter '" + param + "' is not sweepable for " + s.name);
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  SweepResult out;
  std::vector<double> xs, ys;
  for (const auto& v : values) {
    Config c = base;
    c.set(param, v, "sweep");
    out.runs.push_back(run_scenario(s, c));
    xs.push_back(c.real(param));
    ys.push_back(report_value(out.runs.back(), s.sweep_metric));
  }

  RunReport& sum = out.summary;
  sum.scenario = s.name + "-sweep-" + param;
  sum.anchor = s.anchor;
  sum.seed = base.seed();
  sum.config = out.runs.front().config;
  for (auto& [k, v] : sum.config)
    if (k == param) v = "sweep";
  Table t{"sweep", {param, s.sweep_metric, "slope_so_far"}, {}};
  std::vector<double> fx, fy;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] > 0 && ys[i] > kRefinementFloor && std::isfinite(ys[i])) {
      fx.push_back(xs[i]);
      fy.push_back(ys[i]);
    }
    const double slope = fx.size() >= 2 ? loglog_slope(fx, fy) : std::numeric_limits<double>::quiet_NaN();
    t.rows.push_back({xs[i], ys[i], slope});
  }
  sum.tables.push_back(t);
  const double slope = fx.size() >= 2 ? loglog_slope(fx, fy) : std::numeric_limits<double>::quiet_NaN();
  sum.metric("fitted_loglog_slope", slope);
  sum.metric("points", static_cast<double>(xs.size()));

  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  double rise = 0.0, fall = 0.0;  // worst step up / down in value order, above the floor
  for (std::size_t i = 1; i < order.size(); ++i) {
    const double prev = ys[order[i - 1]], next = ys[order[i]];
    rise = std::max(rise, next - std::max(prev, kRefinementFloor));
    fall = std::max(fall, prev - std::max(next, kRefinementFloor));
  }
  sum.metric("nonincreasing", rise <= 0.0 ? 1.0 : 0.0);

  sum.require_at_most("failed_runs", static_cast<double>(std::count_if(out.runs.begin(), out.runs.end(),
                                                                         [](const RunReport& r) { return !r.passed(); })),
                      0.0, s.anchor);
  for (const auto& claim : s.claims) {
    if (claim.param != param || xs.size() < 2) continue;
    switch (claim.kind) {
      case SweepClaim::Kind::NonincreasingInValue:
        sum.require_at_most("nonincreasing_in_" + param, rise, 0.0, s.anchor);
        break;
      case SweepClaim::Kind::NondecreasingInValue:
        sum.require_at_most("nondecreasing_in_" + param, fall, 0.0, s.anchor);
        break;
      case SweepClaim::Kind::MinSlope:
        sum.require_at_least("loglog_slope_in_" + param, slope, claim.slope, s.anchor);
        break;
    }
  }
  double total = 0.0;
  for (const auto& r : out.runs) total += r.wall_clock;
  sum.wall_clock = total;
  return out;
}

}  // namespace warplab::cli

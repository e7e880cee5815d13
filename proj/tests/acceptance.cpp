// Runs the scenario suite at default settings and prints one verdict line per
// acceptance criterion. A criterion passes when every listed check passes at
// exactly the listed tolerance and the runtime gate, if any, holds.

#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "scenarios/registry.hpp"

using namespace warplab::cli;

namespace {

struct Expect {
  std::string scenario;  // key into the run cache
  std::string check;
  std::string relation;
  double tolerance;
};

struct Criterion {
  int id;
  std::string title;
  std::vector<Expect> expects;
  std::vector<std::pair<std::string, double>> time_limits;  // scenario, seconds
};

struct Cached {
  RunReport report;
  std::string error;
};

std::map<std::string, Cached> cache;

// Cache key "name" or "name|key=value".
const Cached& get(const std::string& key) {
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  Cached c;
  const auto bar = key.find('|');
  const std::string name = key.substr(0, bar);
  try {
    const Scenario& s = find_scenario(name);
    Config cfg = scenario_config(s);
    if (bar != std::string::npos) cfg.apply_overrides({key.substr(bar + 1)});
    c.report = run_scenario(s, cfg);
  } catch (const std::exception& e) {
    c.error = e.what();
  }
  return cache.emplace(key, c).first->second;
}

std::vector<Criterion> criteria() {
  const std::string m = "measured-observable", mc = "minimal-coupling", ss = "smearing-scale";
  const std::string jm = "joint-measurability", sp = "star-product", pc = "product-compat", cl = "classical-limit";
  const std::string lv = "liouvillian", pt = "potential", sk = "maxwell|field=skew";
  return {
      {1, "fibered conjugation equals the brute-force evolution",
       {{"theorem1", "oracle_identity", "<=", 1e-8}, {"theorem1", "oracle_weyl", "<=", 1e-8},
        {"theorem1", "oracle_P", "<=", 1e-8}, {"theorem1", "oracle_P2", "<=", 1e-8},
        {"theorem1", "oracle_X2", "<=", 1e-8}, {"theorem1", "fibered_identity", "<=", 1e-8},
        {"theorem1", "fibered_weyl", "<=", 1e-8}, {"theorem1", "fibered_P", "<=", 1e-8},
        {"theorem1", "fibered_P2", "<=", 1e-8}, {"theorem1", "fibered_X2", "<=", 1e-8}},
       {{"theorem1", 10.0}}},
      {2, "measured-observable formula matches composite statistics",
       {{m, "formula_statistics", "<=", 1e-8}, {m, "formula_instrument_dual", "<=", 1e-8},
        {m, "kappa0_multiple_of_identity", "<=", 1e-10}},
       {}},
      {3, "probability reproducibility",
       {{m, "reproducibility_own_observable", "<=", 1e-8}, {m, "reproducibility_sharp_positive", ">", 0.0},
        {m, "sharp_residual_decreases_with_variance", ">", 0.0}},
       {}},
      {4, "sequential marginals",
       {{"sequential", "first_marginal", "<=", 1e-10}, {"sequential", "commuting_second_marginal", "<=", 1e-10},
        {"sequential", "noncommuting_second_marginal", "<=", 1e-8}},
       {}},
      {5, "minimal coupling gives the substituted momentum",
       {{mc, "oracle_residual", "<=", 1e-8}, {mc, "closed_residual", "<=", 1e-6},
        {mc, "refinement_increase", "<=", 0.0}},
       {{mc, 30.0}}},
      {6, "Landau levels are discrete and equally spaced",
       {{"landau", "spacing_spread", "<=", 0.02}, {"landau", "spacing_count", ">=", 5.0},
        {"landau", "tensor_spacing_cv", ">", 0.25}},
       {{"landau", 60.0}}},
      {7, "energy smearing and scale reading",
       {{ss, "smeared_completeness", "<=", 1e-9}, {ss, "ladder_smeared_completeness", "<=", 1e-9},
        {ss, "wrap_mass", "<=", 1e-12}, {ss, "ladder_wrap_mass", "<=", 1e-12},
        {ss, "matched_scale_deviation", "<=", 1e-8},
        {ss, "undersized_scale_deviation", ">", 1e-8}, {ss, "undersized_leakage", ">", 0.0}},
       {}},
      {8, "joint measurability of smeared position and momentum",
       {{jm, "marginals_gaussian", "<=", 1e-8}, {jm, "marginals_narrow_gaussian", "<=", 1e-8},
        {jm, "marginals_mixture", "<=", 1e-8}, {jm, "mismatched_pair_control", ">", 1e-8}},
       {}},
      {9, "star products",
       {{sp, "fft_vs_double_sum", "<=", 1e-9}, {sp, "zero_deformation_pointwise", "<=", 1e-9},
        {sp, "zero_deformation_operator", "<=", 1e-9}, {sp, "associativity", "<=", 1e-7},
        {pc, "weyl_compatibility", "<=", 1e-8}},
       {}},
      {10, "classical limit of the star commutator",
       {{cl, "loglog_slope", ">=", 1.8}, {cl, "momentum_bracket_is_force", "<=", 1e-12}},
       {}},
      {11, "Bianchi identity and current continuity",
       {{"maxwell", "bianchi", "<=", 1e-9}, {"maxwell", "current_continuity", "<=", 1e-9},
        {sk, "bianchi", "negative", 1e-2}},
       {}},
      {12, "Liouvillian and the electric potential",
       {{lv, "gns_omega", "<=", 1e-10}, {lv, "line_omega", "<=", 1e-10},
        {pt, "liouvillian_residual", "<=", 1e-7}, {pt, "momentum_residual", "<=", 1e-7},
        {pt, "oracle_residual", "<=", 1e-9}, {pt, "omega_block", "<=", 1e-9}},
       {}},
      {13, "gauge covariance",
       {{"gauge", "momentum_shift", "<=", 1e-8}, {"gauge", "generator_replacement", "<=", 1e-8},
        {"gauge", "landau_levels_invariant", "<=", 1e-7}},
       {}},
  };
}

// Verdict and a short reason for one expectation.
bool evaluate(const Expect& e, std::string& note) {
  const Cached& c = get(e.scenario);
  if (!c.error.empty()) {
    note = e.scenario + " raised: " + c.error;
    return false;
  }
  const Check* k = c.report.check(e.check);
  if (!k) {
    note = e.scenario + " has no check " + e.check;
    return false;
  }
  char buf[160];
  if (e.relation == "negative") {
    // A failing check used as a negative control: must fail by a clear margin.
    const bool ok = !k->pass && k->value > e.tolerance;
    std::snprintf(buf, sizeof buf, "%s %.2e > %.0e (control)", e.check.c_str(), k->value, e.tolerance);
    note = buf;
    return ok;
  }
  std::snprintf(buf, sizeof buf, "%s %.2e %s %.0e", e.check.c_str(), k->value, e.relation.c_str(), e.tolerance);
  note = buf;
  if (k->relation != e.relation || k->tolerance != e.tolerance) {
    note += " [scenario uses " + k->relation + " " + std::to_string(k->tolerance) + "]";
    return false;
  }
  return k->pass;
}

}  // namespace

int main() {
  int failed = 0;
  for (const Criterion& cr : criteria()) {
    bool ok = true;
    std::string shown, first_bad;
    for (const Expect& e : cr.expects) {
      std::string note;
      const bool pass = evaluate(e, note);
      if (!pass && first_bad.empty()) first_bad = note;
      ok = ok && pass;
      if (shown.empty()) shown = note;
    }
    std::string timing;
    for (const auto& [name, limit] : cr.time_limits) {
      const double t = get(name).report.wall_clock;
      char buf[64];
      std::snprintf(buf, sizeof buf, "; %s %.2f s < %.0f s", name.c_str(), t, limit);
      timing += buf;
      if (!(t < limit)) ok = false;
    }
    std::printf("%s criterion %2d: %s (%zu checks; %s%s)\n", ok ? "PASS" : "FAIL", cr.id, cr.title.c_str(),
                cr.expects.size(), ok ? shown.c_str() : first_bad.empty() ? "runtime gate" : first_bad.c_str(),
                timing.c_str());
    if (!ok) ++failed;
  }
  std::printf("%d of 13 criteria passed\n", 13 - failed);
  return failed == 0 ? 0 : 1;
}

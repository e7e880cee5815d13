#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "scenarios/registry.hpp"
#include "warplab/electro.hpp"
#include "warplab/measurement.hpp"

namespace warplab::cli {

namespace {

void scheme_keys(Config& c) {
  c.declare("N", ValueType::Integer, "32", "points of the system and apparatus lines");
  c.declare("length", ValueType::Real, "16", "box length of both lines");
  c.declare("kappa", ValueType::Real, "1", "coupling constant");
  c.declare("pointer_variance", ValueType::Real, "1", "position variance of the apparatus state");
  c.declare("pointer_momentum", ValueType::Real, "1.2", "mean momentum of the apparatus state");
}

MeasurementScheme scheme_from(const Config& c, double kappa, double variance) {
  if (variance <= 0) throw ConfigError("pointer_variance must be positive");
  const int n = c.integer("N");
  const double len = c.real("length");
  const LatticeSpace h = make_lattice(1, {n}, {len});
  const DensityState om(gaussian_state(h, {0.0}, {std::sqrt(variance)}, {c.real("pointer_momentum")}));
  return position_scheme(h, h, kappa, om);
}

std::vector<double> parse_list(const std::string& text, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0') throw ConfigError("invalid list entry '" + item + "' for key '" + key + "'");
    out.push_back(v);
  }
  return out;
}

// Largest entry of E - (tr E / d) 1 over all effects.
double identity_defect(const Povm& p) {
  double worst = 0.0;
  for (const auto& e : p.effects()) {
    const CMat m = e.to_dense();
    const cplx mean = m.trace() / double(m.rows());
    worst = std::max(worst, (m - mean * CMat::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff());
  }
  return worst;
}

// ------------------------------------------------------ measured observable

void observable_declare(Config& c) {
  scheme_keys(c);
  c.declare("states", ValueType::Integer, "5", "seeded pure states for the statistics comparison");
  c.declare("variance_ladder", ValueType::Text, "1,0.5,0.25", "pointer variances for the sharp-observable ladder");
  c.declare("tolerance", ValueType::Real, "1e-8", "closed form against composite statistics");
  c.declare("kappa0_tolerance", ValueType::Real, "1e-10", "zero-coupling effects against multiples of 1");
}

void observable_run(const Config& c, RunReport& r, const std::string& anchor) {
  const double tol = c.real("tolerance");
  const unsigned seed = static_cast<unsigned>(c.seed());
  const MeasurementScheme s = scheme_from(c, c.real("kappa"), c.real("pointer_variance"));
  const LatticeSpace& h = s.space.first();
  const MeasuredObservable mo = measured_observable(s);
  r.metric("snap_error", mo.snap_error);

  const auto pure = state_corpus(h, seed, c.integer("states"), 0);
  r.require_at_most("formula_statistics", reproducibility_residual(s, mo.povm, pure), tol, anchor);
  double dual = 0.0;
  const LinearOperator one = LinearOperator::identity(h);
  for (int o = 0; o < mo.povm.size(); ++o)
    dual = std::max(dual, effect_distance(instrument_dual(s, o, one), mo.povm.effect(o)));
  r.require_at_most("formula_instrument_dual", dual, tol, anchor);
  const PovmReport pr = mo.povm.check();
  r.require_at_most("povm_completeness", pr.completeness, tol, anchor);
  r.require_at_least("povm_min_eigenvalue", pr.min_eigenvalue, -tol, anchor);

  const MeasuredObservable flat = measured_observable(scheme_from(c, 0.0, c.real("pointer_variance")));
  r.require_at_most("kappa0_multiple_of_identity", identity_defect(flat.povm), c.real("kappa0_tolerance"), anchor);

  const auto mixed = state_corpus(h, seed + 1, 5, 2);
  r.require_at_most("reproducibility_own_observable", reproducibility_residual(s, mo.povm, mixed), tol, anchor);
  const Pvm sharp = pvm_of_operator(position_operator(h, 0), s.outcome_bins);
  const double sharp_res = reproducibility_residual(s, sharp, mixed);
  if (c.real("kappa") > 0) r.require_above("reproducibility_sharp_positive", sharp_res, 0.0, anchor);
  r.metric("sharp_residual", sharp_res);

  // Narrower pointer, smaller failure of the sharp observable.
  Table tab{"pointer_variance", {"pointer_variance", "sharp_residual"}, {}};
  for (double v : parse_list(c.text("variance_ladder"), "variance_ladder")) {
    const MeasurementScheme sv = scheme_from(c, c.real("kappa"), v);
    tab.rows.push_back({v, reproducibility_residual(sv, sharp, mixed)});
  }
  std::sort(tab.rows.begin(), tab.rows.end(), [](const auto& a, const auto& b) { return a[0] > b[0]; });
  if (tab.rows.size() < 2) throw ConfigError("variance_ladder needs at least two entries");
  double step = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < tab.rows.size(); ++i) step = std::min(step, tab.rows[i - 1][1] - tab.rows[i][1]);
  r.require_above("sharp_residual_decreases_with_variance", step, 0.0, anchor);
  r.tables.push_back(tab);
}

// ------------------------------------------------------------- sequential

void sequential_declare(Config& c) {
  scheme_keys(c);
  c.declare("marginal_tolerance", ValueType::Real, "1e-10", "first marginal and commuting second marginal");
  c.declare("smearing_tolerance", ValueType::Real, "1e-8", "noncommuting second marginal against the predicted smearing");
}

void sequential_run(const Config& c, RunReport& r, const std::string& anchor) {
  const double mt = c.real("marginal_tolerance");
  const MeasurementScheme s = scheme_from(c, c.real("kappa"), c.real("pointer_variance"));
  const LatticeSpace& h = s.space.first();
  const MeasuredObservable mo = measured_observable(s);
  const int n = h.points(0);
  const Pvm ep = pvm_of_operator(momentum_operator(h, 0), momentum_bins(h));
  const BiObservable bp = sequential_joint(s, ep);
  r.require_at_most("first_marginal", povm_distance(bp.marginal_first(), mo.povm), mt, anchor);

  const Pvm ex = pvm_of_operator(position_operator(h, 0), lattice_bins(h));
  const BiObservable bx = sequential_joint(s, ex);
  r.require_at_most("commuting_second_marginal", povm_distance(bx.marginal_second(), ex), mt, anchor);

  const ProbabilityMeasureGrid kick = momentum_kick_law(s);
  const double smeared = povm_distance(bp.marginal_second(), smear(ep, kick));
  r.require_at_most("noncommuting_second_marginal", smeared, c.real("smearing_tolerance"), anchor);
  r.metric("momentum_disturbance", povm_distance(bp.marginal_second(), ep));
  r.metric("kick_mean", kick.mean());
  r.metric("kick_variance", kick.variance());
  Table tab{"kick_law", {"shift", "weight"}, {}};
  for (int i = 0; i < n; ++i) tab.rows.push_back({kick.binning.reps[i], kick.weights[i]});
  r.tables.push_back(tab);
}

// ----------------------------------------------------- joint measurability

void joint_declare(Config& c) {
  c.declare("N", ValueType::Integer, "32", "points of the line (even, at most 64)");
  c.declare("length", ValueType::Real, "16", "box length");
  c.declare("tolerance", ValueType::Real, "1e-8", "per-bin marginal deviation");
  c.declare("completeness_tolerance", ValueType::Real, "1e-9", "sum of all phase-space effects against 1");
}

void joint_run(const Config& c, RunReport& r, const std::string& anchor) {
  const LatticeSpace line = make_lattice(1, {c.integer("N")}, {c.real("length")});
  const double tol = c.real("tolerance");
  const CVec g1 = gaussian_state(line, {0.5}, {1.0}, {0.3}).unit_vector();
  const CVec g2 = gaussian_state(line, {-1.0}, {0.5}, {0.0}).unit_vector();
  const CVec g3 = gaussian_state(line, {2.0}, {0.8}, {-0.6}).unit_vector();
  const CMat mix = 0.6 * g1 * g1.adjoint() + 0.4 * g3 * g3.adjoint();
  const std::vector<std::pair<std::string, DensityState>> choices = {
      {"gaussian", DensityState(WaveFunction::from_unit_vector(line, g1))},
      {"narrow_gaussian", DensityState(WaveFunction::from_unit_vector(line, g2))},
      {"mixture", DensityState(line, mix)}};
  std::vector<JointMeasurement> built;
  for (const auto& [name, t] : choices) {
    const JointMeasurement j = joint_measurability_construct(t);
    r.require_at_most("marginals_" + name, marginal_deviation(j.phase_space, j.chi, j.eta), tol, anchor);
    std::vector<LinearOperator> all;
    const int n = line.points(0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) all.push_back(j.phase_space.effect(a, b));
    const LinearOperator sum = linear_combination(std::vector<cplx>(all.size(), 1.0), all);
    r.require_at_most("completeness_" + name, effect_distance(sum, LinearOperator::identity(line)),
                      c.real("completeness_tolerance"), anchor);
    built.push_back(j);
  }
  // The first construction's marginals against the second state's momentum law.
  r.require_above("mismatched_pair_control", marginal_deviation(built[0].phase_space, built[0].chi, built[1].eta), tol, anchor);
}

}  // namespace

void add_measurement_scenarios(std::vector<Scenario>& out) {
  {
    const std::string a = "Measured observable of a von Neumann scheme: the pointer law convolved with E^X";
    out.push_back({"measured-observable", a, observable_declare,
                   [a](const Config& c, RunReport& r) { observable_run(c, r, a); }, {"kappa", "pointer_variance"},
                   "sharp_residual", {{"pointer_variance", SweepClaim::Kind::NondecreasingInValue, 0.0}}});
  }
  {
    const std::string a = "Sequential measurement: marginals of the first outcome and the disturbed second observable";
    out.push_back({"sequential", a, sequential_declare, [a](const Config& c, RunReport& r) { sequential_run(c, r, a); },
                   {"kappa", "pointer_variance"}, "noncommuting_second_marginal", {}});
  }
  {
    const std::string a = "Phase-space POVM from a density operator with smeared position and momentum marginals";
    out.push_back({"joint-measurability", a, joint_declare, [a](const Config& c, RunReport& r) { joint_run(c, r, a); },
                   {}, "", {}});
  }
}

}  // namespace warplab::cli

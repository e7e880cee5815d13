#include <cmath>

#include "scenarios/registry.hpp"
#include "warplab/electro.hpp"

namespace warplab::cli {

namespace {

// -------------------------------------------------------- minimal coupling

void coupling_declare(Config& c) {
  c.declare("N", ValueType::Integer, "64", "points per axis of the fibered comparison");
  c.declare("length", ValueType::Real, "20", "box length per axis");
  c.declare("B", ValueType::Real, "0.5", "field along the plane normal");
  c.declare("q", ValueType::Real, "1", "charge");
  c.declare("refine_from", ValueType::Integer, "32", "coarser grid for the refinement step, 0 to skip");
  c.declare("oracle_N", ValueType::Integer, "8", "points per axis of the brute-force run, 0 to skip");
  c.declare("oracle_length", ValueType::Real, "4.8", "box length of the brute-force run");
  c.declare("oracle_tolerance", ValueType::Real, "1e-8", "fibered against brute-force evolution");
  c.declare("tolerance", ValueType::Real, "1e-6", "fibered against P + qA on smooth product vectors");
}

void coupling_run(const Config& c, RunReport& r, const std::string& anchor) {
  const Vec3 b(0.0, 0.0, c.real("B"));
  const double q = c.real("q"), len = c.real("length");
  const unsigned seed = static_cast<unsigned>(c.seed());
  if (const int on = c.integer("oracle_N"); on > 0) {
    const double ol = c.real("oracle_length");
    const auto rep = minimal_coupling_check(make_lattice(2, {on, on}, {ol, ol}), b, q, true, seed);
    r.require_at_most("oracle_residual", rep.oracle_residual, c.real("oracle_tolerance"), anchor);
  }
  const int n = c.integer("N");
  const auto fine = minimal_coupling_check(make_lattice(2, {n, n}, {len, len}), b, q, false, seed);
  r.require_at_most("closed_residual", fine.closed_residual, c.real("tolerance"), anchor);
  Table tab{"refinement", {"points", "closed_residual"}, {}};
  if (const int nc = c.integer("refine_from"); nc > 0) {
    const auto coarse = minimal_coupling_check(make_lattice(2, {nc, nc}, {len, len}), b, q, false, seed);
    tab.rows.push_back({double(nc), coarse.closed_residual});
    r.require_at_most("refinement_increase", fine.closed_residual - std::max(coarse.closed_residual, 1e-12), 0.0, anchor);
  }
  tab.rows.push_back({double(n), fine.closed_residual});
  r.tables.push_back(tab);
  for (std::size_t i = 0; i < fine.per_axis.size(); ++i) r.metric("axis" + std::to_string(i) + "_residual", fine.per_axis[i]);
}

// ------------------------------------------------------------------ landau

void landau_declare(Config& c) {
  c.declare("N", ValueType::Integer, "64", "points per axis");
  c.declare("length", ValueType::Real, "20", "box length per axis");
  c.declare("B", ValueType::Real, "1", "field strength");
  c.declare("q", ValueType::Real, "1", "charge");
  c.declare("m", ValueType::Real, "1", "mass");
  c.declare("levels", ValueType::Integer, "7", "low levels extracted");
  c.declare("spread_tolerance", ValueType::Real, "0.02", "(max - min) / mean of adjacent spacings");
  c.declare("min_spacings", ValueType::Integer, "5", "required number of adjacent spacings");
  c.declare("tensor_cv_threshold", ValueType::Real, "0.25", "spacing variation the tensor counterpart must exceed");
}

void landau_run(const Config& c, RunReport& r, const std::string& anchor) {
  const int n = c.integer("N");
  const double len = c.real("length"), b = c.real("B"), q = c.real("q"), m = c.real("m");
  const LatticeSpace s = make_lattice(2, {n, n}, {len, len});
  LandauOptions opt;
  opt.levels = c.integer("levels");
  const LandauSpectrum ls = landau_spectrum(s, b, q, m, opt);
  r.require_at_most("spacing_spread", ls.spread, c.real("spread_tolerance"), anchor);
  r.require_at_least("spacing_count", double(ls.spacings.size()), double(c.integer("min_spacings")), anchor);
  const TensorSpectrum ts = tensor_landau_spectrum(s, b, q, m, opt.levels);
  r.require_above("tensor_spacing_cv", ts.cv, c.real("tensor_cv_threshold"), anchor);
  r.metric("mean_spacing", ls.mean_spacing);
  r.metric("spacing_over_qB_over_m", ls.ratio_qb_over_m);
  r.metric("spacing_over_B_over_2m", ls.ratio_b_over_2m);
  r.metric("curl_factor", ls.curl_factor);
  Table tab{"levels", {"index", "same_space_level", "tensor_level"}, {}};
  for (Eigen::Index i = 0; i < ls.levels.size(); ++i)
    tab.rows.push_back({double(i), ls.levels[i], i < ts.levels.size() ? ts.levels[i] : std::nan("")});
  r.tables.push_back(tab);
}

// ------------------------------------------------------- smearing / scale

void smearing_declare(Config& c) {
  c.declare("N", ValueType::Integer, "8", "points per axis of the 2D system and pointer");
  c.declare("length", ValueType::Real, "8", "system box length per axis");
  c.declare("B", ValueType::Real, "1", "field strength");
  c.declare("m", ValueType::Real, "1", "mass");
  c.declare("pointer_width", ValueType::Real, "0.6", "pointer Gaussian width in pointer spacings");
  c.declare("ladder_points", ValueType::Integer, "32", "points of the oscillator line");
  c.declare("ladder_length", ValueType::Real, "16", "box length of the oscillator line");
  c.declare("ladder_bins_per_level", ValueType::Integer, "8", "energy bins per oscillator quantum");
  c.declare("completeness_tolerance", ValueType::Real, "1e-9", "sum of smeared effects against 1");
  c.declare("tolerance", ValueType::Real, "1e-8", "per-effect deviation of the scale reading");
  c.declare("wrap_tolerance", ValueType::Real, "1e-12", "mass carried past the ends of the energy grid");
}

void smearing_run(const Config& c, RunReport& r, const std::string& anchor) {
  const int n = c.integer("N");
  const double len = c.real("length"), b = c.real("B"), m = c.real("m");
  const double tol = c.real("tolerance"), ctol = c.real("completeness_tolerance");
  const LatticeSpace h = make_lattice(2, {n, n}, {len, len});
  const double width = std::pow(2 * kPi / len, 2) / (2 * m);
  // Pointer spacing chosen so that B times it is a momentum step of h.
  const double ak = 2 * kPi / (len * b);
  const LatticeSpace k = make_lattice(2, {n, n}, {n * ak, n * ak});
  const LinearOperator h0 = linear_combination(
      {1.0 / (2 * m), 1.0 / (2 * m)},
      {LinearOperator::momentum_diagonal(h, RVec(h.momentum_grid(0).array().square())),
       LinearOperator::momentum_diagonal(h, RVec(h.momentum_grid(1).array().square()))});
  const Pvm e0 = pvm_of_operator(h0, OutcomeBinning::uniform(n * n, -width / 2, width));
  const double pw = c.real("pointer_width") * ak;
  const CVec psi = gaussian_state(k, {0.0, 0.0}, {pw, pw}).unit_vector();
  const ShiftLaw law = energy_shift_law(h, k, psi, b, m, width);
  const EnergySmearing es = energy_smearing(e0, law);
  r.require_at_most("smeared_completeness", es.povm.check().completeness, ctol, anchor);
  const LinearOperator shifted = linear_combination({1.0, law.mean_shift}, {h0, LinearOperator::identity(h)});
  r.require_at_most("first_moment_shift", effect_distance(first_moment(es.povm), shifted), tol, anchor);
  r.metric("mean_shift", law.mean_shift);
  r.require_at_most("wrap_mass", es.wrap_mass, c.real("wrap_tolerance"), anchor);
  r.metric("dropped_mass", law.dropped_mass);

  // Oscillator scale: pointer support on shifts 0 and one bin, below one quantum.
  const int lp = c.integer("ladder_points"), per = c.integer("ladder_bins_per_level");
  const LatticeSpace line = make_lattice(1, {lp}, {c.real("ladder_length")});
  const double omega = per * width;
  const LinearOperator ladder = ladder_hamiltonian(line, omega);
  const Pvm el = pvm_of_operator(ladder, OutcomeBinning::uniform(lp * per, -width / 2, width));
  CVec two = CVec::Zero(k.size());
  two[k.flatten({n / 2, n / 2})] = 1.0;
  two[k.flatten({n / 2, n / 2 + 1})] = 1.0;
  const EnergySmearing ls = energy_smearing(el, energy_shift_law(h, k, two, b, m, width));
  r.require_at_most("ladder_smeared_completeness", ls.povm.check().completeness, ctol, anchor);
  r.require_at_most("ladder_wrap_mass", ls.wrap_mass, c.real("wrap_tolerance"), anchor);
  RVec matched(lp + 1), fine(lp * per + 1);
  for (int i = 0; i <= lp; ++i) matched[i] = i * omega;
  for (int i = 0; i <= lp * per; ++i) fine[i] = i * width - width / 2;
  const ScaleReading good = scale_reading(ls.povm, OutcomeBinning::from_edges(matched), ladder, tol);
  r.require_at_most("matched_scale_deviation", good.deviation, tol, anchor);
  r.metric("matched_leakage", good.leakage);
  const ScaleReading bad = scale_reading(ls.povm, OutcomeBinning::from_edges(fine), ladder, tol);
  r.require_above("undersized_scale_deviation", bad.deviation, tol, anchor);
  r.require_above("undersized_leakage", bad.leakage, 0.0, anchor);
  Table tab{"shift_law", {"offset", "weight"}, {}};
  for (int i = 0; i < law.law.binning.size(); ++i)
    if (law.law.weights[i] > 0) tab.rows.push_back({law.law.binning.reps[i], law.law.weights[i]});
  r.tables.push_back(tab);
}

// ------------------------------------------------------------------- gauge

void gauge_declare(Config& c) {
  c.declare("N", ValueType::Integer, "64", "points per axis");
  c.declare("length", ValueType::Real, "20", "box length per axis");
  c.declare("B", ValueType::Real, "1", "field strength of the Landau comparison");
  c.declare("q", ValueType::Real, "1", "charge");
  c.declare("amplitude", ValueType::Real, "0.7", "amplitude of the gauge function");
  c.declare("line_points", ValueType::Integer, "64", "points of the energy line for the time gauge");
  c.declare("line_window", ValueType::Real, "40", "width of the energy line");
  c.declare("tolerance", ValueType::Real, "1e-8", "operator identities");
  c.declare("spectrum_tolerance", ValueType::Real, "1e-7", "Landau levels before and after the gauge change");
}

void gauge_run(const Config& c, RunReport& r, const std::string& anchor) {
  const int n = c.integer("N");
  const double len = c.real("length"), b = c.real("B"), q = c.real("q"), amp = c.real("amplitude");
  const double tol = c.real("tolerance");
  const unsigned seed = static_cast<unsigned>(c.seed());
  const LatticeSpace s = make_lattice(2, {n, n}, {len, len});
  const RVec x = s.position_grid(0), y = s.position_grid(1);
  const RVec th = amp * (2 * kPi * x / len).array().sin() + 0.3 * (2 * kPi * y / len).array().cos();
  const RVec th2 = 0.4 * (4 * kPi * y / len).array().sin();
  const GaugeReport g = gauge_transform(s, th, th2, Vec3(0, 0, b), q, seed);
  r.require_at_most("momentum_shift", g.momentum_residual, tol, anchor);
  r.require_at_most("generator_replacement", g.generator_residual, tol, anchor);
  r.require_at_most("composition", g.composition_residual, tol, anchor);
  const LatticeSpace line = make_lattice(1, {c.integer("line_points")}, {c.real("line_window")});
  r.require_at_most("time_gauge", time_gauge_residual(line, 0.5, seed), tol, anchor);

  const LandauSpectrum before = landau_spectrum(s, b, q, 1.0);
  // Gauge-changed potential A + grad chi with chi = -theta/q, probe rotated along.
  const std::array<RVec, 2> extra{RVec(-spectral_derivative(s, th, 0) / q), RVec(-spectral_derivative(s, th, 1) / q)};
  const CVec start = exp_diagonal(LinearOperator::position_diagonal(s, th), kI).apply(landau_probe(s, b, q));
  const LandauSpectrum after = landau_spectrum(s, b, q, 1.0, {}, &extra, &start);
  r.require_at_most("landau_levels_invariant", (after.levels - before.levels).cwiseAbs().maxCoeff(),
                    c.real("spectrum_tolerance"), anchor);
}

// ----------------------------------------------------------------- maxwell

void maxwell_declare(Config& c) {
  c.declare("N", ValueType::Integer, "16", "points per axis of the 4D grid");
  c.declare("field", ValueType::Text, "potential", "potential (derived F) or skew (random non-potential F)");
  c.declare("modes", ValueType::Integer, "6", "random Fourier modes per component");
  c.declare("tolerance", ValueType::Real, "1e-9", "Bianchi and current-continuity residuals");
}

void maxwell_run(const Config& c, RunReport& r, const std::string& anchor) {
  const int n = c.integer("N");
  const LatticeSpace g = make_lattice(4, {n, n, n, n}, {2 * kPi, 2 * kPi, 2 * kPi, 2 * kPi});
  const std::string kind = c.text("field");
  const unsigned seed = static_cast<unsigned>(c.seed());
  FieldSample f;
  if (kind == "potential") f = field_from_potential(g, random_potential(g, seed, c.integer("modes")));
  else if (kind == "skew") f = random_skew_field(g, seed, c.integer("modes"));
  else throw ConfigError("field must be 'potential' or 'skew', got '" + kind + "'");
  const MaxwellReport m = maxwell_check(f);
  r.require_at_most("bianchi", m.bianchi, c.real("tolerance"), anchor);
  r.require_at_most("current_continuity", m.continuity, c.real("tolerance"), anchor);
  r.metric("current_max", m.current_max);
  r.metric("field_max", m.field_max);
}

}  // namespace

void add_field_scenarios(std::vector<Scenario>& out) {
  {
    const std::string a = "Coupling W = exp(-i q Theta X (x) X) turns P (x) 1 into the minimal substitution P + qA";
    out.push_back({"minimal-coupling", a, coupling_declare, [a](const Config& c, RunReport& r) { coupling_run(c, r, a); },
                   {"N"}, "closed_residual", {{"N", SweepClaim::Kind::NonincreasingInValue, 0.0}}});
  }
  {
    const std::string a = "Same-space minimal coupling has a discrete, equally spaced low spectrum; the tensor form does not";
    out.push_back({"landau", a, landau_declare, [a](const Config& c, RunReport& r) { landau_run(c, r, a); }, {}, "", {}});
  }
  {
    const std::string a = "Apparatus smearing of the free energy is a POVM; a matched scale reading recovers E^H0 on intervals";
    out.push_back({"smearing-scale", a, smearing_declare, [a](const Config& c, RunReport& r) { smearing_run(c, r, a); }, {}, "", {}});
  }
  {
    const std::string a = "Gauge change U = exp(i theta) shifts momentum by -grad theta and leaves the spectrum fixed";
    out.push_back({"gauge", a, gauge_declare, [a](const Config& c, RunReport& r) { gauge_run(c, r, a); }, {}, "", {}});
  }
  {
    const std::string a = "Force field from a potential obeys the Bianchi identity and its current is conserved";
    out.push_back({"maxwell", a, maxwell_declare, [a](const Config& c, RunReport& r) { maxwell_run(c, r, a); }, {}, "", {}});
  }
}

}  // namespace warplab::cli

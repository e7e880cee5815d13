#include <cmath>
#include <random>

#include "scenarios/registry.hpp"
#include "warplab/equilibrium.hpp"
#include "warplab/star.hpp"

namespace warplab::cli {

namespace {

// ------------------------------------------------------------- liouvillian

void liouvillian_declare(Config& c) {
  c.declare("dimension", ValueType::Integer, "6", "dimension of the random Hamiltonian of the doubled model");
  c.declare("beta", ValueType::Real, "0.7", "inverse temperature");
  c.declare("N", ValueType::Integer, "64", "points of the energy line");
  c.declare("refine_N", ValueType::Integer, "128", "refined line for the commutation step, 0 to skip");
  c.declare("window", ValueType::Real, "40", "width of the energy line");
  c.declare("probe_center", ValueType::Real, "10", "energy of the probe vectors");
  c.declare("probe_width", ValueType::Real, "1", "width of the probe vectors");
  c.declare("probes", ValueType::Integer, "4", "seeded probe vectors");
  c.declare("shift_spacings", ValueType::Integer, "3", "time-translation shift in line spacings");
  c.declare("omega_tolerance", ValueType::Real, "1e-10", "L Omega and Gibbs expectations");
  c.declare("commutation_tolerance", ValueType::Real, "1e-6", "commutator residual on the base line");
  c.declare("covariance_tolerance", ValueType::Real, "1e-8", "binwise gap of the shifted energy law");
}

void liouvillian_run(const Config& c, RunReport& r, const std::string& anchor) {
  const double otol = c.real("omega_tolerance");
  const unsigned seed = static_cast<unsigned>(c.seed());
  std::mt19937_64 rng(c.seed());
  const int d = c.integer("dimension");
  const double beta = c.real("beta");
  const CMat h = random_hermitian(d, rng);
  const GnsModel g = build_gns(h, beta);
  r.require_at_most("gns_omega", g.omega_residual(), otol, anchor);
  // Gibbs state from its own eigendecomposition.
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  const RVec w = (-beta * es.eigenvalues()).array().exp();
  CMat rho = es.eigenvectors() * w.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  rho /= rho.trace();
  const CMat obs = random_hermitian(d, rng);
  r.require_at_most("gns_gibbs_expectation",
                    std::max(std::abs(g.expectation(h) - (rho * h).trace()), std::abs(g.expectation(obs) - (rho * obs).trace())),
                    otol, anchor);

  auto line_at = [&](int n, const std::string& tag) {
    const SpectralLine m = build_spectral_line(n, c.real("window"));
    const auto probes = line_corpus(m.line, c.real("probe_center"), c.real("probe_width"), seed, c.integer("probes"));
    double comm = 0.0;
    for (const auto& v : probes) comm = std::max(comm, m.time.commutation_residual(v));
    r.require_at_most(tag + "_omega", m.omega_residual(), otol, anchor);
    r.require_at_most(tag + "_covariance", covariance_residual(m, c.integer("shift_spacings") * m.line.spacing(0), probes),
                      c.real("covariance_tolerance"), anchor);
    return comm;
  };
  const int n = c.integer("N");
  const double base = line_at(n, "line");
  r.require_at_most("commutation_residual", base, c.real("commutation_tolerance"), anchor);
  Table tab{"refinement", {"points", "commutation_residual"}, {{double(n), base}}};
  if (const int nf = c.integer("refine_N"); nf > 0) {
    const double fine = line_at(nf, "refined_line");
    tab.rows.push_back({double(nf), fine});
    r.require_at_most("refinement_increase", fine - std::max(base, 1e-12), 0.0, anchor);
  }
  r.tables.push_back(tab);
}

// --------------------------------------------------------------- potential

struct PotentialGrid {
  int line_points;
  double window;
  int spatial_points;
  double spatial_length;
  int pointer_points;
  std::vector<double> pointer_lengths;
  double probe_center;
};

PotentialReport potential_at(const PotentialGrid& g, const Config& c, bool oracle) {
  const SpectralLine m = build_spectral_line(g.line_points, g.window);
  const LatticeSpace k = make_lattice(2, {g.pointer_points, g.pointer_points}, g.pointer_lengths);
  const PotentialSetup s = potential_setup(m, g.spatial_points, g.spatial_length, k, c.real("e"), c.real("E"));
  const DensityState phi(gaussian_state(k, {0.0, c.real("phi_mean")}, {1.0, c.real("phi_width")}, {0.0, 0.0}));
  const unsigned seed = static_cast<unsigned>(c.seed());
  const auto corpus = system_corpus(s, g.probe_center, c.real("probe_width"), seed, c.integer("probes"));
  return potential_deformation(s, phi, oracle, corpus, seed);
}

void potential_declare(Config& c) {
  c.declare("N", ValueType::Integer, "64", "points of the energy line");
  c.declare("window", ValueType::Real, "40", "width of the energy line");
  c.declare("spatial_points", ValueType::Integer, "48", "points of the system's spatial axis");
  c.declare("spatial_length", ValueType::Real, "24", "length of the system's spatial axis");
  c.declare("pointer_points", ValueType::Integer, "32", "points per axis of the apparatus");
  c.declare("pointer_length", ValueType::Real, "16", "length per axis of the apparatus");
  c.declare("e", ValueType::Real, "0.3", "charge");
  c.declare("E", ValueType::Real, "1", "electric field along the spatial axis");
  c.declare("phi_mean", ValueType::Real, "0.7", "spatial mean of the apparatus state");
  c.declare("phi_width", ValueType::Real, "0.6", "spatial width of the apparatus state");
  c.declare("probe_center", ValueType::Real, "10", "energy of the probe vectors");
  c.declare("probe_width", ValueType::Real, "1", "width of the probe vectors");
  c.declare("probes", ValueType::Integer, "3", "seeded product probes");
  c.declare("refine_from", ValueType::Integer, "32", "coarser energy line for the refinement fit, 0 to skip");
  c.declare("oracle_N", ValueType::Integer, "8", "energy-line points of the brute-force run, 0 to skip");
  c.declare("tolerance", ValueType::Real, "1e-7", "deformed L and momentum against the closed forms");
  c.declare("oracle_tolerance", ValueType::Real, "1e-9", "fibered against brute-force evolution");
  c.declare("omega_tolerance", ValueType::Real, "1e-9", "Omega row and column of the deformation difference");
  c.declare("potential_tolerance", ValueType::Real, "1e-10", "V against the directly computed moment");
  c.declare("min_order", ValueType::Integer, "1", "required refinement order of the deformed-L residual");
}

void potential_run(const Config& c, RunReport& r, const std::string& anchor) {
  const double tol = c.real("tolerance");
  const double pl = c.real("pointer_length");
  const PotentialGrid base{c.integer("N"), c.real("window"), c.integer("spatial_points"), c.real("spatial_length"),
                           c.integer("pointer_points"), {pl, pl}, c.real("probe_center")};
  const PotentialReport rep = potential_at(base, c, false);
  r.require_at_most("liouvillian_residual", rep.liouvillian_residual, tol, anchor);
  r.require_at_most("momentum_residual", rep.momentum_residual, tol, anchor);
  r.require_at_most("omega_block", rep.omega_block, c.real("omega_tolerance"), anchor);

  // Direct moment of the apparatus state.
  const LatticeSpace k = make_lattice(2, {base.pointer_points, base.pointer_points}, base.pointer_lengths);
  const DensityState phi(gaussian_state(k, {0.0, c.real("phi_mean")}, {1.0, c.real("phi_width")}, {0.0, 0.0}));
  const double moment = c.real("e") * c.real("E") * phi.expectation(position_operator(k, 1)).real();
  r.require_at_most("potential_vs_moment", std::abs(rep.potential - moment), c.real("potential_tolerance"), anchor);
  r.metric("potential", rep.potential);

  if (const int on = c.integer("oracle_N"); on > 0) {
    const PotentialGrid small{on, 2.0 * on, on, double(on), on, {double(on), 20.0}, on / 2.0};
    const PotentialReport o = potential_at(small, c, true);
    r.require_at_most("oracle_residual", o.oracle_residual, c.real("oracle_tolerance"), anchor);
    r.require_at_most("oracle_omega_block", o.omega_block, c.real("omega_tolerance"), anchor);
  }

  Table tab{"refinement", {"points", "liouvillian_residual", "momentum_residual"}, {}};
  if (const int nc = c.integer("refine_from"); nc > 0) {
    PotentialGrid coarse = base;
    coarse.line_points = nc;
    const PotentialReport cr = potential_at(coarse, c, false);
    tab.rows.push_back({double(nc), cr.liouvillian_residual, cr.momentum_residual});
    const double order = -loglog_slope({double(nc), double(base.line_points)},
                                       {cr.liouvillian_residual, std::max(rep.liouvillian_residual, 1e-300)});
    r.require_at_least("refinement_order", order, c.integer("min_order"), anchor);
  }
  tab.rows.push_back({double(base.line_points), rep.liouvillian_residual, rep.momentum_residual});
  r.tables.push_back(tab);
}

}  // namespace

void add_equilibrium_scenarios(std::vector<Scenario>& out) {
  {
    const std::string a = "Liouvillian annihilates the equilibrium vector; the time operator is conjugate to it";
    out.push_back({"liouvillian", a, liouvillian_declare, [a](const Config& c, RunReport& r) { liouvillian_run(c, r, a); },
                   {"N"}, "commutation_residual", {{"N", SweepClaim::Kind::NonincreasingInValue, 0.0}}});
  }
  {
    const std::string a = "Electric coupling deforms L into L + V, with V the field times the apparatus position";
    out.push_back({"potential", a, potential_declare, [a](const Config& c, RunReport& r) { potential_run(c, r, a); }, {}, "", {}});
  }
}

}  // namespace warplab::cli

#include <cmath>
#include <random>

#include "scenarios/registry.hpp"
#include "warplab/dense.hpp"
#include "warplab/electro.hpp"
#include "warplab/star.hpp"

namespace warplab::cli {

namespace {

// ---------------------------------------------------------------- theorem1

const char* const kOpNames[] = {"identity", "weyl", "P", "P2", "X2"};

std::vector<LinearOperator> probe_operators(const LatticeSpace& h) {
  const LinearOperator x = position_operator(h, 0), p = momentum_operator(h, 0);
  const double b = 2.0 * kPi / h.length(0);
  return {LinearOperator::identity(h), exp_diagonal(x, cplx(0.0, b)), p, p * p, x * x};
}

// Fiber y of W^dagger (T (x) 1) W for W = exp(-i kappa X (x) P_K) in closed
// form: position functions are untouched, P becomes P - kappa y.
FiberedOperator substituted(const CompositeSpace& cs, int which, double kappa) {
  const LatticeSpace h = cs.first();
  const RVec y = cs.second().momentum_grid(0);
  const RVec p = h.momentum_grid(0);
  const auto ops = probe_operators(h);
  return FiberedOperator(cs, [=](std::size_t fy) {
    if (which == 2) return LinearOperator::momentum_diagonal(h, RVec(p.array() - kappa * y[fy]));
    if (which == 3) return LinearOperator::momentum_diagonal(h, RVec((p.array() - kappa * y[fy]).square()));
    return ops[which];
  });
}

void theorem1_declare(Config& c) {
  c.declare("N", ValueType::Integer, "64", "points per factor of the fibered comparison");
  c.declare("spacing", ValueType::Real, "0.5", "lattice spacing of both factors");
  c.declare("kappa", ValueType::Real, "1", "coupling constant");
  c.declare("oracle_N", ValueType::Integer, "8", "points per factor of the dense-exponential run, 0 to skip");
  c.declare("probes", ValueType::Integer, "4", "seeded probe vectors per operator");
  c.declare("tolerance", ValueType::Real, "1e-8", "max residual over probes");
}

void theorem1_run(const Config& c, RunReport& r, const std::string& anchor) {
  const double tol = c.real("tolerance"), kappa = c.real("kappa"), a = c.real("spacing");
  const unsigned seed = static_cast<unsigned>(c.seed());
  Table tab{"residuals", {"points", "operator", "residual"}, {}};
  auto run_at = [&](int n, const std::string& tag) {
    const LatticeSpace h = make_lattice(1, {n}, {n * a});
    const CompositeSpace cs(h, h, AxisMask{true});
    const LinearOperator x = position_operator(h, 0), y = momentum_operator(h, 0);
    const auto ops = probe_operators(h);
    double worst = 0.0;
    const bool brute = cs.size() <= kDenseCap;
    const auto corpus = brute ? std::vector<std::pair<CVec, CVec>>{} : smooth_product_corpus(h, h, seed, c.integer("probes"));
    const FiberedOperator w = fibered_unitary(cs, {x}, {y}, kappa);
    for (int i = 0; i < 5; ++i) {
      double res = 0.0;
      if (brute) {
        res = theorem1_check(ops[i], cs, {x}, {y}, kappa, seed, c.integer("probes")).residual;
      } else {
        const auto rs = product_residuals(conjugate_by(w, ops[i]), substituted(cs, i, kappa), corpus);
        for (double v : rs) res = std::max(res, v);
      }
      r.require_at_most(tag + "_" + kOpNames[i], res, tol, anchor);
      tab.rows.push_back({double(n), double(i), res});
      worst = std::max(worst, res);
    }
    r.metric(tag + "_comparison_is_closed_form", brute ? 0.0 : 1.0);
    return worst;
  };
  const int oracle = c.integer("oracle_N");
  if (oracle > 0) run_at(oracle, "oracle");
  r.metric("residual", run_at(c.integer("N"), "fibered"));
  r.tables.push_back(tab);
}

// ------------------------------------------------------------ star product

// Smooth periodic symbol: product of von Mises bumps times one plane wave.
SmoothSymbol bump_symbol(const LatticeSpace& g, double c0, double c1, double s0, double s1) {
  const RVec x = g.position_grid(0), p = g.position_grid(1);
  const double l0 = g.length(0), l1 = g.length(1);
  CVec v(g.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v[i] = std::exp(c0 * (std::cos(2 * kPi * (x[i] - s0) / l0) - 1) + c1 * (std::cos(2 * kPi * (p[i] - s1) / l1) - 1)) *
           std::polar(1.0, 2 * kPi * x[i] / l0);
  return SmoothSymbol(g, v);
}

struct SymbolTriple {
  SmoothSymbol f, g, h;
};

// Fixed smooth symbols whose pairwise products stay inside the alias-free band.
SymbolTriple symbol_corpus(int n, double length) {
  const LatticeSpace g = make_lattice(2, {n, n}, {length, length});
  const double u = length / 8;
  return {bump_symbol(g, 1.0, 0.8, 0.5 * u, -u), bump_symbol(g, 0.7, 1.1, -u, 0.3 * u), bump_symbol(g, 0.9, 0.9, 0.0, u)};
}

void star_declare(Config& c) {
  c.declare("N", ValueType::Integer, "32", "points per phase-space axis");
  c.declare("length", ValueType::Real, "8", "period of each phase-space axis");
  c.declare("theta", ValueType::Real, "0.7", "deformation strength (symplectic)");
  c.declare("tolerance", ValueType::Real, "1e-9", "FFT against double sum, and the zero-deformation limits");
  c.declare("associativity_tolerance", ValueType::Real, "1e-7", "(f*g)*h against f*(g*h)");
}

void star_run(const Config& c, RunReport& r, const std::string& anchor) {
  const double tol = c.real("tolerance");
  const auto s = symbol_corpus(c.integer("N"), c.real("length"));
  const auto theta = DeformationMatrix::symplectic(2, c.real("theta"));
  const SmoothSymbol fg = moyal_product(s.f, s.g, theta);
  const SmoothSymbol ref = moyal_product_reference(s.f, s.g, theta);
  r.require_at_most("fft_vs_double_sum", max_abs_difference(fg, ref) / ref.samples().cwiseAbs().maxCoeff(), tol, anchor);

  const SmoothSymbol flat = moyal_product(s.f, s.g, DeformationMatrix::zero(2));
  const CVec pointwise = s.f.samples().cwiseProduct(s.g.samples());
  r.require_at_most("zero_deformation_pointwise", (flat.samples() - pointwise).cwiseAbs().maxCoeff(), tol, anchor);

  // Operator side: the deformed product at zero deformation is the composition.
  const LatticeSpace lat = make_lattice(2, {8, 8}, {8.0, 8.0});
  std::mt19937_64 rng(c.seed());
  const LinearOperator a = LinearOperator::dense(lat, random_hermitian(lat.size(), rng));
  const LinearOperator b = LinearOperator::dense(lat, random_hermitian(lat.size(), rng));
  const ActionSpec act({momentum_operator(lat, 0), momentum_operator(lat, 1)});
  const CMat prod = rieffel_product(a, b, act, DeformationMatrix::zero(2)).to_dense();
  r.require_at_most("zero_deformation_operator", (prod - a.to_dense() * b.to_dense()).cwiseAbs().maxCoeff(), tol, anchor);

  const double assoc = max_abs_difference(moyal_product(fg, s.h, theta), moyal_product(s.f, moyal_product(s.g, s.h, theta), theta));
  r.require_at_most("associativity", assoc, c.real("associativity_tolerance"), anchor);
  r.metric("outside_band_mass", std::max({s.f.outside_mass(), s.g.outside_mass(), s.h.outside_mass()}));
}

// --------------------------------------------------------- product compat

void compat_declare(Config& c) {
  c.declare("N", ValueType::Integer, "8", "points per axis of the 2D lattice");
  c.declare("length", ValueType::Real, "8", "box length per axis");
  c.declare("theta", ValueType::Real, "1.2732395447351628", "deformation strength (symplectic)");
  c.declare("pairs", ValueType::Integer, "4", "seeded Weyl pairs");
  c.declare("tolerance", ValueType::Real, "1e-8", "max residual of the product relation");
}

void compat_run(const Config& c, RunReport& r, const std::string& anchor) {
  const int n = c.integer("N");
  const double len = c.real("length"), tol = c.real("tolerance");
  const LatticeSpace s2 = make_lattice(2, {n, n}, {len, len});
  const auto theta = DeformationMatrix::symplectic(2, c.real("theta"));
  const ActionSpec act({momentum_operator(s2, 0), momentum_operator(s2, 1)});
  const double dk = 2 * kPi / len;
  auto weyl = [&](int m0, int m1) {
    return exp_diagonal(linear_combination({m0 * dk, m1 * dk}, {position_operator(s2, 0), position_operator(s2, 1)}), kI);
  };
  std::mt19937_64 rng(c.seed());
  std::uniform_int_distribution<int> mode(-2, 2);
  double compat = 0.0, closed = 0.0;
  Table tab{"weyl_pairs", {"m0", "m1", "n0", "n1", "compatibility", "closed_form"}, {}};
  for (int i = 0; i < c.integer("pairs"); ++i) {
    const int m0 = mode(rng), m1 = mode(rng), n0 = mode(rng), n1 = mode(rng);
    const LinearOperator a = weyl(m0, m1), b = weyl(n0, n1);
    const double rc = product_compatibility_check(a, b, act, theta, static_cast<unsigned>(c.seed()) + i);
    // Weyl elements multiply with the phase exp(i u . Theta v).
    const Eigen::Vector2d u(m0 * dk, m1 * dk), v(n0 * dk, n1 * dk);
    const cplx phase = std::polar(1.0, u.dot(theta.matrix() * v));
    const CMat expect = phase * weyl(m0 + n0, m1 + n1).to_dense();
    const double rf = (rieffel_product(a, b, act, theta).to_dense() - expect).cwiseAbs().maxCoeff();
    compat = std::max(compat, rc);
    closed = std::max(closed, rf);
    tab.rows.push_back({double(m0), double(m1), double(n0), double(n1), rc, rf});
  }
  r.require_at_most("weyl_compatibility", compat, tol, anchor);
  r.require_at_most("weyl_closed_form_product", closed, tol, anchor);
  const LinearOperator ra = LinearOperator::dense(s2, random_hermitian(s2.size(), rng));
  const LinearOperator rb = LinearOperator::dense(s2, random_hermitian(s2.size(), rng));
  r.require_at_most("random_pair_compatibility", product_compatibility_check(ra, rb, act, theta, static_cast<unsigned>(c.seed())),
                    tol, anchor);
  r.tables.push_back(tab);
}

// --------------------------------------------------------- classical limit

void classical_declare(Config& c) {
  c.declare("N", ValueType::Integer, "32", "points per phase-space axis");
  c.declare("length", ValueType::Real, "8", "period of each phase-space axis");
  c.declare("t_min", ValueType::Real, "1e-3", "smallest deformation scale");
  c.declare("t_max", ValueType::Real, "1e-1", "largest deformation scale");
  c.declare("t_points", ValueType::Integer, "5", "log-spaced scales between t_min and t_max");
  c.declare("t", ValueType::Real, "0", "single deformation scale (overrides the range when > 0)");
  c.declare("min_slope", ValueType::Real, "1.8", "required log-log slope of the commutator residual");
  c.declare("identity_tolerance", ValueType::Real, "1e-12", "constant-field bracket identities");
}

void classical_run(const Config& c, RunReport& r, const std::string& anchor) {
  const auto s = symbol_corpus(c.integer("N"), c.real("length"));
  std::vector<double> ts;
  if (c.real("t") > 0) {
    ts.push_back(c.real("t"));
  } else {
    const int k = c.integer("t_points");
    if (k < 2) throw ConfigError("t_points must be at least 2");
    const double lo = std::log(c.real("t_max")), hi = std::log(c.real("t_min"));
    for (int i = 0; i < k; ++i) ts.push_back(std::exp(lo + (hi - lo) * i / (k - 1)));
  }
  const ConvergenceTable conv = classical_limit_probe(s.f, s.g, DeformationMatrix::symplectic(2, 1.0), ts);
  Table tab{"convergence", {"t", "residual", "slope_so_far"}, {}};
  for (const auto& row : conv.rows) tab.rows.push_back({row.t, row.residual, row.slope_so_far});
  r.tables.push_back(tab);
  r.metric("residual_at_t", conv.rows.front().residual);
  r.metric("usable_rows", conv.usable);
  if (ts.size() >= 2) r.require_at_least("loglog_slope", conv.slope, c.real("min_slope"), anchor);

  // Constant force matrix: coordinate brackets reproduce its entries.
  const Vec3 b(0.3, -0.5, 0.8), e(0.2, 0.1, -0.4);
  const DeformationMatrix f = force_matrix(b, e);
  double pb = 0.0, sc = 0.0;
  for (std::size_t mu = 0; mu < 4; ++mu)
    for (std::size_t nu = 0; nu < 4; ++nu) {
      const auto pm = AffineSymbol::coordinate(4, mu), pn = AffineSymbol::coordinate(4, nu);
      pb = std::max(pb, std::abs(poisson_bracket(pm, pn, f) - f(mu, nu)));
      sc = std::max(sc, std::abs(star_commutator(pm, pn, f) - kI * f(mu, nu)));
    }
  r.require_at_most("momentum_bracket_is_force", pb, c.real("identity_tolerance"), anchor);
  r.require_at_most("momentum_star_commutator", sc, c.real("identity_tolerance"), anchor);
}

}  // namespace

void add_deform_scenarios(std::vector<Scenario>& out) {
  {
    const std::string a = "Coupled evolution of T (x) 1 equals the warped convolution of T on a dense subspace";
    out.push_back({"theorem1", a, theorem1_declare, [a](const Config& c, RunReport& r) { theorem1_run(c, r, a); },
                   {"N", "kappa"}, "residual", {{"N", SweepClaim::Kind::NonincreasingInValue, 0.0}}});
  }
  {
    const std::string a = "Deformed product of symbols: FFT path, double sum, zero-deformation limit, associativity";
    out.push_back({"star-product", a, star_declare, [a](const Config& c, RunReport& r) { star_run(c, r, a); }, {}, "", {}});
  }
  {
    const std::string a = "Product of deformed operators is the deformation of the deformed product";
    out.push_back({"product-compat", a, compat_declare, [a](const Config& c, RunReport& r) { compat_run(c, r, a); }, {}, "", {}});
  }
  {
    const std::string a = "Star commutator over i t tends to the Poisson bracket; momentum brackets give the force";
    out.push_back({"classical-limit", a, classical_declare, [a](const Config& c, RunReport& r) { classical_run(c, r, a); },
                   {"t"}, "residual_at_t", {{"t", SweepClaim::Kind::MinSlope, 1.8}}});
  }
}

}  // namespace warplab::cli

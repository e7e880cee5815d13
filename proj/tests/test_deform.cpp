#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "oracles.hpp"
#include "warplab/star.hpp"

using namespace warplab;

namespace {

double max_entry(const CMat& m) { return m.cwiseAbs().maxCoeff(); }

// Momentum generators on a 4 x 4 lattice, their dense matrices, joint
// spectral points and rank-one spectral projectors, all from the explicit DFT.
struct MomentumAction {
  LatticeSpace space = make_lattice(2, {4, 4}, {3.0, 5.0});
  ActionSpec action{{momentum_operator(space, 0), momentum_operator(space, 1)}};
  std::vector<CMat> gens{oracle::kron(oracle::momentum(4, 3.0), oracle::eye(4)),
                         oracle::kron(oracle::eye(4), oracle::momentum(4, 5.0))};
  std::vector<Eigen::Vector2d> points;
  std::vector<CMat> projectors;
  MomentumAction() {
    const CMat f = oracle::kron(oracle::dft(4), oracle::dft(4));
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        points.push_back({oracle::freq(a, 4, 3.0), oracle::freq(b, 4, 5.0)});
        const CVec u = f.adjoint().col(a * 4 + b);
        projectors.push_back(u * u.adjoint());
      }
  }
  // exp(i x.G) T exp(-i x.G) with the Pade exponential.
  CMat act(const Eigen::Vector2d& x, const CMat& t) const {
    const CMat u = oracle::unitary(x[0] * gens[0] + x[1] * gens[1], -1.0);
    return u * t * u.adjoint();
  }
};

CMat warped_oracle(const MomentumAction& m, const CMat& t, const Eigen::Matrix2d& theta) {
  CMat out = CMat::Zero(16, 16);
  for (std::size_t j = 0; j < m.points.size(); ++j) out += m.act(theta * m.points[j], t) * m.projectors[j];
  return out;
}

CMat rieffel_oracle(const MomentumAction& m, const CMat& a, const CMat& b, const Eigen::Matrix2d& theta) {
  CMat out = CMat::Zero(16, 16);
  for (std::size_t l = 0; l < m.points.size(); ++l)
    for (std::size_t j = 0; j < m.points.size(); ++j)
      out += m.act(theta * (m.points[l] - m.points[j]), a) * m.projectors[l] * b * m.projectors[j];
  return out;
}

// Random trigonometric polynomial with modes |k| <= 2 slots per axis.
SmoothSymbol trig_symbol(const LatticeSpace& grid, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  const int n = grid.points(0);
  CVec s = CVec::Zero(grid.size());
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b) {
      const cplx c(nd(rng) / (1 + a * a + b * b), nd(rng) / (1 + a * a + b * b));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          s[i * n + j] += c * std::polar(1.0, 2 * kPi * double(a * i + b * j) / n);
    }
  return SmoothSymbol(grid, s);
}

}  // namespace

TEST_CASE("deformation matrices") {
  RMat bad(2, 2);
  bad << 0.0, 1.0, 0.5, 0.0;
  CHECK_THROWS_AS(DeformationMatrix{bad}, PreconditionError);
  CHECK_NOTHROW(DeformationMatrix::general(bad));
  const DeformationMatrix j = DeformationMatrix::symplectic(2, 0.7);
  CHECK(j.skew());
  CHECK(std::abs(j(0, 1) + j(1, 0)) < 1e-15);
  CHECK(std::abs(std::abs(j(0, 1)) - 0.7) < 1e-15);
  CHECK_THROWS_AS(DeformationMatrix::symplectic(3, 1.0), PreconditionError);
  CHECK(DeformationMatrix::zero(4).matrix().norm() == 0.0);
}

TEST_CASE("warped convolution against the spectral sum") {
  const MomentumAction m;
  std::mt19937_64 rng(12);
  const CMat t = random_hermitian(16, rng);
  Eigen::Matrix2d th;
  th << 0.0, 0.9, -0.9, 0.0;
  const CMat got = warped_convolution(LinearOperator::dense(m.space, t), m.action, DeformationMatrix(RMat(th))).to_dense();
  CHECK(max_entry(got - warped_oracle(m, t, th)) < 1e-10);
  const CMat zero = warped_convolution(LinearOperator::dense(m.space, t), m.action, DeformationMatrix::zero(2)).to_dense();
  CHECK(max_entry(zero - t) < 1e-12);
}

TEST_CASE("deformed product against the frequency decomposition") {
  const MomentumAction m;
  std::mt19937_64 rng(13);
  const CMat a = random_hermitian(16, rng), b = random_hermitian(16, rng);
  Eigen::Matrix2d th;
  th << 0.0, -1.3, 1.3, 0.0;
  const DeformationMatrix d{RMat(th)};
  const LinearOperator la = LinearOperator::dense(m.space, a), lb = LinearOperator::dense(m.space, b);
  CHECK(max_entry(rieffel_product(la, lb, m.action, d).to_dense() - rieffel_oracle(m, a, b, th)) < 1e-10);
  CHECK(max_entry(rieffel_product(la, lb, m.action, DeformationMatrix::zero(2)).to_dense() - a * b) < 1e-12);
  CHECK(product_compatibility_check(la, lb, m.action, d) < 1e-10);
  // Operators commuting with the action are not deformed.
  const LinearOperator g = momentum_operator(m.space, 0);
  CHECK(max_entry(warped_convolution(g, m.action, d).to_dense() - m.gens[0]) < 1e-10);
}

TEST_CASE("fibered evolution against the brute-force composite") {
  const LatticeSpace h = make_lattice(1, {8}, {4.0}), k = make_lattice(1, {8}, {4.0});
  const CompositeSpace cs(h, k, AxisMask{true});
  std::mt19937_64 rng(5);
  const LinearOperator t = LinearOperator::dense(h, random_hermitian(8, rng));
  for (double kappa : {0.0, 0.6, 1.0}) {
    const TheoremReport r = theorem1_check(t, cs, {position_operator(h, 0)}, {momentum_operator(k, 0)}, kappa);
    CHECK(r.residual < 1e-10);
    CHECK(r.dimension == 64);
  }
  CHECK_THROWS_AS(theorem1_check(LinearOperator::identity(make_lattice(1, {128}, {4.0})),
                                 CompositeSpace(make_lattice(1, {128}, {4.0}), make_lattice(1, {64}, {4.0}), AxisMask{true}),
                                 {position_operator(make_lattice(1, {128}, {4.0}), 0)},
                                 {momentum_operator(make_lattice(1, {64}, {4.0}), 0)}, 1.0),
                  PreconditionError);
}

TEST_CASE("Moyal product against the explicit double sum") {
  const LatticeSpace grid = make_lattice(2, {16, 16}, {6.0, 9.0});
  const SmoothSymbol f = trig_symbol(grid, 1), g = trig_symbol(grid, 2);
  REQUIRE(f.band_limited());
  REQUIRE(g.band_limited());
  Eigen::Matrix2d th;
  th << 0.0, 0.7, -0.7, 0.0;
  const DeformationMatrix d{RMat(th)};
  // The oracle takes one side length, so compare on a square grid.
  const LatticeSpace sq = make_lattice(2, {16, 16}, {6.0, 6.0});
  const SmoothSymbol fs = trig_symbol(sq, 3), gs = trig_symbol(sq, 4);
  const CVec want = oracle::moyal_double_sum(fs.samples(), gs.samples(), 16, 6.0, th);
  CHECK((moyal_product(fs, gs, d).samples() - want).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((moyal_product_reference(fs, gs, d).samples() - want).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(max_abs_difference(moyal_product(f, g, d), moyal_product_reference(f, g, d)) < 1e-9);
  // Zero deformation is the pointwise product.
  const CVec pointwise = f.samples().cwiseProduct(g.samples());
  CHECK((moyal_product(f, g, DeformationMatrix::zero(2)).samples() - pointwise).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("Moyal product is associative on band-limited symbols") {
  const LatticeSpace grid = make_lattice(2, {32, 32}, {8.0, 8.0});
  const SmoothSymbol a = trig_symbol(grid, 7), b = trig_symbol(grid, 8), c = trig_symbol(grid, 9);
  const DeformationMatrix d = DeformationMatrix::symplectic(2, 1.1);
  const SmoothSymbol lhs = moyal_product(moyal_product(a, b, d), c, d);
  const SmoothSymbol rhs = moyal_product(a, moyal_product(b, c, d), d);
  CHECK(max_abs_difference(lhs, rhs) < 1e-8);
}

TEST_CASE("aliased symbols are rejected") {
  const LatticeSpace grid = make_lattice(2, {16, 16}, {6.0, 6.0});
  CVec s(grid.size());
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) s[i * 16 + j] = std::polar(1.0, 2 * kPi * 6 * i / 16.0);
  const SmoothSymbol high(grid, s);
  CHECK_FALSE(high.band_limited());
  CHECK_THROWS_AS(moyal_product(high, high, DeformationMatrix::symplectic(2, 1.0)), NumericalError);
}

TEST_CASE("affine symbols: coordinate commutator and exact products") {
  const DeformationMatrix d = DeformationMatrix::symplectic(2, 0.8);
  const AffineSymbol x = AffineSymbol::coordinate(2, 0), y = AffineSymbol::coordinate(2, 1);
  CHECK(std::abs(star_commutator(x, y, d) - kI * d(0, 1)) < 1e-15);
  CHECK(std::abs(poisson_bracket(x, y, d) - d(0, 1)) < 1e-15);
  CHECK(std::abs(star_commutator(x, x, d)) < 1e-15);
  const LatticeSpace grid = make_lattice(2, {16, 16}, {6.0, 6.0});
  const SmoothSymbol g = trig_symbol(grid, 5);
  // x * g - g * x = i {x, g} exactly.
  const CVec comm = moyal_product(x, g, d).samples() - moyal_product(g, x, d).samples();
  const CVec want = kI * d(0, 1) * [&] {
    // d g / d x_1 spectrally through the explicit DFT.
    const CMat f = oracle::kron(oracle::dft(16), oracle::dft(16));
    CVec gh = f * g.samples();
    for (int a = 0; a < 16; ++a)
      for (int b = 0; b < 16; ++b) gh[a * 16 + b] *= kI * (b == 8 ? 0.0 : oracle::freq(b, 16, 6.0));
    return CVec(f.adjoint() * gh);
  }();
  CHECK((comm - want).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("Poisson bracket of trigonometric symbols") {
  const LatticeSpace grid = make_lattice(2, {16, 16}, {6.0, 8.0});
  const double k1 = 2 * kPi / 6.0, k2 = 2 * 2 * kPi / 8.0;
  const RVec x = grid.axis_positions(0), y = grid.axis_positions(1);
  CVec f(grid.size()), g(grid.size()), want(grid.size());
  const DeformationMatrix d = DeformationMatrix::symplectic(2, 0.6);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      f[i * 16 + j] = std::cos(k1 * x[i]);
      g[i * 16 + j] = std::sin(k2 * y[j]);
      want[i * 16 + j] = d(0, 1) * (-k1 * std::sin(k1 * x[i])) * (k2 * std::cos(k2 * y[j]));
    }
  const CVec got = poisson_bracket(SmoothSymbol(grid, f), SmoothSymbol(grid, g), d).samples();
  CHECK((got - want).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("star commutator approaches the Poisson bracket quadratically") {
  const LatticeSpace grid = make_lattice(2, {32, 32}, {8.0, 8.0});
  const SmoothSymbol f = trig_symbol(grid, 21), g = trig_symbol(grid, 22);
  const ConvergenceTable tab = classical_limit_probe(f, g, DeformationMatrix::symplectic(2, 1.0),
                                                     {1e-3, 3e-3, 1e-2, 3e-2, 1e-1});
  CHECK(tab.usable >= 3);
  CHECK(tab.slope >= 1.8);
  CHECK(tab.slope <= 2.2);
  CHECK(loglog_slope({1.0, 2.0, 4.0}, {3.0, 12.0, 48.0}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(classical_limit_probe(f, g, DeformationMatrix::symplectic(2, 1.0), {0.0, 0.1}),
                  PreconditionError);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "oracles.hpp"
#include "warplab/electro.hpp"

using namespace warplab;

namespace {

double max_entry(const CMat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("deformation matrix of a magnetic field") {
  const DeformationMatrix t = theta_from_B(Vec3(0.3, -0.5, 0.8));
  CHECK(t.skew());
  CHECK(t(1, 2) == doctest::Approx(0.3));   // eps^{1 2 3} B_1
  CHECK(t(2, 0) == doctest::Approx(-0.5));  // eps^{2 3 1} B_2
  CHECK(t(0, 1) == doctest::Approx(0.8));   // eps^{3 1 2} B_3
  CHECK(t(2, 1) == doctest::Approx(-0.3));
  const DeformationMatrix f = force_matrix(Vec3(0.3, -0.5, 0.8), Vec3(0.2, 0.1, -0.4));
  REQUIRE(f.size() == 4);
  CHECK(f.skew());
  CHECK(f(0, 1) == doctest::Approx(-0.2));
  CHECK(f(0, 3) == doctest::Approx(0.4));
  CHECK(f(2, 3) == doctest::Approx(0.3));
}

TEST_CASE("minimal coupling unitary against the Pade exponential") {
  const LatticeSpace h = make_lattice(2, {4, 4}, {2.0, 3.0});
  const CompositeSpace cs(h, h, AxisMask{false, false});
  const double b = 0.9, q = 0.7;
  const CMat x1 = oracle::kron(oracle::position(4, 2.0), oracle::eye(4));
  const CMat x2 = oracle::kron(oracle::eye(4), oracle::position(4, 3.0));
  const CMat gen = b * (oracle::kron(x1, x2) - oracle::kron(x2, x1));
  const CMat w = oracle::unitary(gen, q);
  const FiberedOperator wf = minimal_coupling_unitary(cs, Vec3(0, 0, b), q);
  CHECK(max_entry(wf.to_dense() - w) < 1e-10);
  const CMat p1 = oracle::kron(oracle::momentum(4, 2.0), oracle::eye(4));
  const CMat ref = w.adjoint() * oracle::kron(p1, oracle::eye(16)) * w;
  CHECK(max_entry(conjugate_by(wf, momentum_operator(h, 0)).to_dense() - ref) < 1e-10);
  CHECK(max_entry(minimal_coupling_unitary(cs, Vec3(0, 0, b), 0.0).to_dense() - oracle::eye(256)) < 1e-15);
}

TEST_CASE("minimal coupling reproduces the substituted momentum") {
  const LatticeSpace h = make_lattice(2, {4, 4}, {4.0, 4.0});
  const MinimalCouplingReport small = minimal_coupling_check(h, Vec3(0, 0, 0.5), 1.0, true);
  CHECK(small.oracle_residual >= 0.0);
  CHECK(small.oracle_residual < 1e-10);
  CHECK(small.dimension == 256);

  const LatticeSpace wide = make_lattice(2, {64, 64}, {16.0, 16.0});
  const MinimalCouplingReport r = minimal_coupling_check(wide, Vec3(0, 0, 0.5), 1.0, false);
  CHECK(r.oracle_residual == -1.0);
  CHECK(r.closed_residual < 1e-6);
  CHECK(minimal_coupling_check(wide, Vec3(0, 0, 0.5), 0.0, false).closed_residual < 1e-12);

  // Momentum along the field is untouched in three dimensions.
  const LatticeSpace cube = make_lattice(3, {8, 8, 8}, {8.0, 8.0, 8.0});
  const MinimalCouplingReport c = minimal_coupling_check(cube, Vec3(0, 0, 0.4), 1.0, false, 1, 2);
  REQUIRE(c.per_axis.size() == 3);
  CHECK(c.per_axis[2] < 1e-12);
}

TEST_CASE("vector potential is B cross X") {
  const LatticeSpace h = make_lattice(2, {8, 8}, {4.0, 4.0});
  const auto a = vector_potential(Vec3(0, 0, 2.0), h);
  REQUIRE(a.size() == 2);
  const RVec x = h.position_grid(0), y = h.position_grid(1);
  const CVec a0 = a[0].rebased({false, false}).diagonal_values(), a1 = a[1].rebased({false, false}).diagonal_values();
  for (std::size_t i = 0; i < h.size(); ++i) {
    CHECK(std::abs(a0[i] - (-2.0 * y[i])) < 1e-14);
    CHECK(std::abs(a1[i] - 2.0 * x[i]) < 1e-14);
  }
  CHECK_THROWS_AS(vector_potential(Vec3(1.0, 0, 0), h), PreconditionError);
}

TEST_CASE("Lanczos recovers a known spectrum") {
  const LatticeSpace s = make_lattice(1, {32}, {32.0});
  RVec d(32);
  for (int i = 0; i < 32; ++i) d[i] = 0.5 * i - 3.0;
  const RitzResult r = lanczos(LinearOperator::position_diagonal(s, d), CVec::Constant(32, 1.0 / std::sqrt(32.0)), 32);
  REQUIRE(r.values.size() >= 32);
  RVec v = r.values.head(32);
  std::sort(v.data(), v.data() + v.size());
  CHECK((v - d).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(r.weights.sum() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("Landau levels are equally spaced") {
  // A = B x X has curl 2B, so the cyclotron quantum is 2qB/m.
  const LatticeSpace s = make_lattice(2, {64, 64}, {20.0, 20.0});
  const LandauSpectrum l = landau_spectrum(s, 1.0, 1.0, 1.0);
  REQUIRE(l.spacings.size() >= 5);
  CHECK(l.spread <= 0.02);
  CHECK(l.curl_factor == doctest::Approx(2.0));
  CHECK(std::abs(l.ratio_qb_over_m - l.curl_factor) <= 0.02);
  CHECK(std::abs(l.ratio_b_over_2m - 2 * l.curl_factor) <= 0.04);
  CHECK(std::abs(l.levels[0] - 0.5 * l.mean_spacing) < 0.02);
  // The fibered operator is a family of shifted free particles, not Landau levels.
  CHECK(tensor_landau_spectrum(s, 1.0, 1.0, 1.0, 7).cv > 0.25);
}

TEST_CASE("Landau window") {
  CHECK_THROWS_AS(check_landau_window(make_lattice(2, {16, 16}, {4.0, 4.0}), 1.0, 1.0), PreconditionError);
  CHECK_THROWS_AS(check_landau_window(make_lattice(2, {16, 16}, {16.0, 16.0}), 1.0, 1.0), PreconditionError);
  CHECK_NOTHROW(check_landau_window(make_lattice(2, {64, 64}, {20.0, 20.0}), 1.0, 1.0));
  CHECK(spacing_spread(RVec::Constant(4, 2.0)) == 0.0);
  CHECK(spacing_cv(RVec::Constant(4, 2.0)) == 0.0);
}

TEST_CASE("energy shift law for point pointers") {
  const int n = 8;
  const double len = 8.0, b = 1.0, m = 1.0;
  const LatticeSpace h = make_lattice(2, {n, n}, {len, len});
  const double width = std::pow(2 * kPi / len, 2) / (2 * m), ak = 2 * kPi / (len * b);
  const LatticeSpace k = make_lattice(2, {n, n}, {n * ak, n * ak});
  CVec centre = CVec::Zero(k.size());
  centre[k.flatten({n / 2, n / 2})] = 1.0;
  const ShiftLaw zero = energy_shift_law(h, k, centre, b, m, width);
  CHECK(zero.mean_shift == doctest::Approx(0.0));
  CHECK(zero.law.weights[zero.law.binning.locate(0.0)] == doctest::Approx(1.0));
  // One pointer step maps to one momentum step, i.e. one energy bin.
  CVec step = CVec::Zero(k.size());
  step[k.flatten({n / 2, n / 2 + 1})] = 1.0;
  const ShiftLaw one = energy_shift_law(h, k, step, b, m, width);
  CHECK(one.mean_shift == doctest::Approx(width));
  CHECK(one.law.weights[one.law.binning.locate(width)] == doctest::Approx(1.0));
  CHECK(one.dropped_mass == 0.0);
}

TEST_CASE("energy smearing by a two-point law") {
  const LatticeSpace line = make_lattice(1, {16}, {8.0});
  const double w = 0.25;
  const LinearOperator h0 = ladder_hamiltonian(line, 4 * w);
  const Pvm e = pvm_of_operator(h0, OutcomeBinning::uniform(16 * 4, -w / 2, w));
  RVec two(2);
  two << 0.3, 0.7;
  ShiftLaw law;
  law.law = offset_measure(two, 0, w);
  law.mean_shift = law.law.mean();
  const EnergySmearing s = energy_smearing(e, law);
  CHECK(s.povm.check().completeness < 1e-9);
  CHECK(s.povm.check().min_eigenvalue > -1e-12);
  double worst = 0.0;
  for (int d = 1; d + 1 < e.size(); ++d) {
    const CMat want = 0.3 * e.effect(d).to_dense() + 0.7 * e.effect(d - 1).to_dense();
    worst = std::max(worst, max_entry(s.povm.effect(d).to_dense() - want));
  }
  CHECK(worst < 1e-12);
  // Unsmeared, a scale matched to the quanta returns the level projectors.
  RVec one(1);
  one << 1.0;
  ShiftLaw none;
  none.law = offset_measure(one, 0, w);
  RVec edges(17);
  for (int i = 0; i <= 16; ++i) edges[i] = i * 4 * w;
  const ScaleReading r = scale_reading(energy_smearing(e, none).povm, OutcomeBinning::from_edges(edges), h0);
  CHECK(r.deviation < 1e-10);
  CHECK(r.leakage < 1e-10);
  CHECK(r.pass);
}

TEST_CASE("oscillator ladder spectrum") {
  const LatticeSpace line = make_lattice(1, {16}, {8.0});
  Eigen::SelfAdjointEigenSolver<CMat> es(ladder_hamiltonian(line, 0.5).to_dense());
  for (int n = 0; n < 16; ++n) CHECK(es.eigenvalues()[n] == doctest::Approx(0.5 * (n + 0.5)));
}

TEST_CASE("joint measurement from a density operator") {
  const LatticeSpace line = make_lattice(1, {32}, {16.0});
  const DensityState t(gaussian_state(line, {0.5}, {1.0}, {0.3}));
  const JointMeasurement j = joint_measurability_construct(t);
  CHECK(marginal_deviation(j.phase_space, j.chi, j.eta) < 1e-8);
  CMat total = CMat::Zero(32, 32);
  double lowest = 0.0;
  for (int a = 0; a < j.phase_space.first().size(); ++a)
    for (int b = 0; b < j.phase_space.second().size(); ++b) {
      const CMat g = j.phase_space.effect(a, b).to_dense();
      total += g;
      lowest = std::min(lowest, Eigen::SelfAdjointEigenSolver<CMat>(g).eigenvalues().minCoeff());
    }
  CHECK(max_entry(total - CMat::Identity(32, 32)) < 1e-9);
  CHECK(lowest > -1e-12);
  CHECK(j.chi.total() == doctest::Approx(1.0));
  CHECK(j.eta.total() == doctest::Approx(1.0));
  CHECK(momentum_bins(line).size() == 32);
  // Marginals of one construction against the laws of another state fail.
  const JointMeasurement other = joint_measurability_construct(DensityState(gaussian_state(line, {-1.0}, {0.5})));
  CHECK(marginal_deviation(j.phase_space, j.chi, other.eta) > 1e-6);
}

TEST_CASE("gauge transformations") {
  const LatticeSpace s = make_lattice(2, {64, 64}, {20.0, 20.0});
  const RVec x = s.position_grid(0), y = s.position_grid(1);
  const RVec th = 0.7 * (2 * kPi * x / 20.0).array().sin() + 0.3 * (2 * kPi * y / 20.0).array().cos();
  const RVec th2 = 0.4 * (4 * kPi * y / 20.0).array().sin();
  const GaugeReport g = gauge_transform(s, th, th2, Vec3(0, 0, 1.0), 1.0);
  CHECK(g.momentum_residual < 1e-8);
  CHECK(g.generator_residual < 1e-8);
  CHECK(g.composition_residual < 1e-12);
  CHECK(time_gauge_residual(make_lattice(1, {64}, {40.0}), 0.5) < 1e-8);
}

TEST_CASE("field strengths from a potential satisfy the homogeneous equations") {
  const LatticeSpace g = make_lattice(4, {8, 8, 8, 8}, {2 * kPi, 2 * kPi, 2 * kPi, 2 * kPi});
  const MaxwellReport p = maxwell_check(field_from_potential(g, random_potential(g, 3)));
  CHECK(p.field_max > 1e-2);
  CHECK(p.bianchi < 1e-9 * std::max(1.0, p.field_max));
  CHECK(p.continuity < 1e-9 * std::max(1.0, p.current_max));
  const MaxwellReport k = maxwell_check(random_skew_field(g, 3));
  CHECK(k.bianchi > 1e-2);
  CHECK(k.continuity < 1e-9 * std::max(1.0, k.current_max));
}

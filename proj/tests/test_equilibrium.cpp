#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "oracles.hpp"
#include "warplab/equilibrium.hpp"

using namespace warplab;

namespace {

double max_entry(const CMat& m) { return m.cwiseAbs().maxCoeff(); }

PotentialReport small_potential(double e, bool oracle) {
  const SpectralLine m = build_spectral_line(8, 16.0);
  const LatticeSpace k = make_lattice(2, {8, 8}, {8.0, 20.0});
  const PotentialSetup s = potential_setup(m, 8, 8.0, k, e, 1.0);
  const DensityState phi(gaussian_state(k, {0.0, 0.7}, {1.0, 0.6}));
  return potential_deformation(s, phi, oracle, system_corpus(s, 4.0, 1.0, 1, 2));
}

}  // namespace

TEST_CASE("GNS vector reproduces Gibbs expectations") {
  std::mt19937_64 rng(17);
  const CMat h = random_hermitian(6, rng), a = random_hermitian(6, rng);
  const GnsModel g = build_gns(h, 0.7);
  CHECK(g.omega_residual() < 1e-10);
  CHECK(std::abs(g.omega.norm() - 1.0) < 1e-12);
  CHECK(std::abs(g.expectation(a) - oracle::gibbs(h, 0.7, a)) < 1e-10);
  CHECK(std::abs(g.expectation(CMat::Identity(6, 6)) - 1.0) < 1e-12);
  // Liouvillian is H (x) 1 - 1 (x) conj(H).
  const CMat l = oracle::kron(h, oracle::eye(6)) - oracle::kron(oracle::eye(6), CMat(h.conjugate()));
  CHECK(max_entry(g.liouvillian.to_dense() - l) < 1e-10);
  Eigen::SelfAdjointEigenSolver<CMat> es(l);
  RVec spec = g.liouvillian_spectrum();
  CHECK((spec - es.eigenvalues()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("low temperature GNS state is the ground state") {
  std::mt19937_64 rng(18);
  const CMat h = random_hermitian(5, rng), a = random_hermitian(5, rng);
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  const CVec v0 = es.eigenvectors().col(0);
  const double gap = es.eigenvalues()[1] - es.eigenvalues()[0];
  const double beta = 40.0 / gap;
  CHECK(std::abs(build_gns(h, beta).expectation(a) - v0.dot(a * v0)) < 1e-12);
  CHECK_THROWS_AS(build_gns(CMat::Identity(65, 65), 1.0), PreconditionError);
}

TEST_CASE("spectral line: time operator and covariance") {
  std::vector<double> res;
  for (int n : {64, 128}) {
    const SpectralLine m = build_spectral_line(n, 40.0);
    CHECK(m.omega_residual() < 1e-10);
    const auto probes = line_corpus(m.line, 10.0, 1.0, 1, 4);
    double worst = 0.0;
    for (const auto& p : probes) worst = std::max(worst, m.time.commutation_residual(p));
    res.push_back(worst);
    CHECK(covariance_residual(m, 3 * m.line.spacing(0), probes) < 1e-8);
    const CMat u = m.time.exp_i(0.4);
    CHECK(max_entry(u * u.adjoint() - CMat::Identity(n, n)) < 1e-10);
  }
  CHECK(res[0] < 1e-6);
  CHECK(res[1] <= std::max(res[0], 1e-12));
  const SpectralLine m = build_spectral_line(64, 40.0);
  CHECK_THROWS_AS(covariance_residual(m, 0.3 * m.line.spacing(0), line_corpus(m.line, 10.0, 1.0, 1, 2)),
                  PreconditionError);
}

TEST_CASE("potential identification") {
  const LatticeSpace k = make_lattice(2, {32, 32}, {16.0, 16.0});
  RVec field(1);
  field << 0.5;
  const DensityState sym(gaussian_state(k, {0.0, 0.0}, {1.0, 0.7}));
  CHECK(std::abs(potential_identification(2.0, field, sym)) < 1e-12);
  const DensityState shifted(gaussian_state(k, {0.0, 1.5}, {1.0, 0.7}));
  CHECK(potential_identification(2.0, field, shifted) == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(potential_identification(0.0, field, shifted) == 0.0);
  // A point mass at x0 gives e E x0.
  const DensityState point(position_delta(k, k.flatten({16, 19})));
  const double x0 = k.axis_positions(1)[19];
  CHECK(potential_identification(0.3, field, point) == doctest::Approx(0.3 * 0.5 * x0));
  // Mass near the edge is rejected.
  const DensityState edge(position_delta(k, k.flatten({16, 31})));
  CHECK_THROWS_AS(potential_identification(0.3, field, edge), PreconditionError);
  CHECK_THROWS_AS(potential_identification(0.3, RVec::Zero(2), sym), PreconditionError);
}

TEST_CASE("electric deformation against the brute-force evolution") {
  const PotentialReport r = small_potential(0.3, true);
  CHECK(r.oracle_residual >= 0.0);
  CHECK(r.oracle_residual < 1e-9);
  CHECK(r.omega_block < 1e-9);
  const PotentialReport z = small_potential(0.0, false);
  CHECK(z.liouvillian_residual < 1e-12);
  CHECK(z.momentum_residual < 1e-12);
  CHECK(z.potential == 0.0);
}

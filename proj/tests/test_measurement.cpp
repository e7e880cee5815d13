#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "oracles.hpp"
#include "warplab/measurement.hpp"

using namespace warplab;

namespace {

double max_entry(const CMat& m) { return m.cwiseAbs().maxCoeff(); }

DensityState pointer_state(const LatticeSpace& k, double sigma, double momentum = 0.0) {
  return DensityState(gaussian_state(k, {0.0}, {sigma}, {momentum}));
}

// (id (x) omega)[A] for a dense composite operator A.
CMat reduce_with(const CMat& a, const CMat& omega, Eigen::Index dh, Eigen::Index dk) {
  CMat out = CMat::Zero(dh, dh);
  for (Eigen::Index i = 0; i < dh; ++i)
    for (Eigen::Index j = 0; j < dh; ++j)
      for (Eigen::Index k = 0; k < dk; ++k)
        for (Eigen::Index l = 0; l < dk; ++l) out(i, j) += a(i * dk + k, j * dk + l) * omega(l, k);
  return out;
}

// Coupling exp(-i kappa X (x) P_K) applied to a composite vector through
// explicit DFT matrices, one system row at a time.
CVec couple(const CVec& v, int nh, double lh, int nk, double lk, double kappa) {
  const CMat f = oracle::dft(nk);
  CVec out(v.size());
  for (int h = 0; h < nh; ++h) {
    const double x = -lh / 2 + h * lh / nh;
    CVec row = f * v.segment(h * nk, nk);
    for (int k = 0; k < nk; ++k) row[k] *= std::polar(1.0, -kappa * x * oracle::freq(k, nk, lk));
    out.segment(h * nk, nk) = f.adjoint() * row;
  }
  return out;
}

// Pointer-reading probabilities for a state, by brute force on the composite.
RVec composite_oracle(const MeasurementScheme& s, const DensityState& rho, int nh, double lh, int nk, double lk) {
  const CVec chi = s.apparatus.pure_vector();
  Eigen::SelfAdjointEigenSolver<CMat> es(rho.matrix());
  RVec pz = RVec::Zero(nk);
  for (int c = 0; c < nh; ++c) {
    const double p = es.eigenvalues()[c];
    if (p < 1e-15) continue;
    const CVec w = couple(oracle::kron(es.eigenvectors().col(c), chi), nh, lh, nk, lk, s.kappa);
    for (int h = 0; h < nh; ++h)
      for (int z = 0; z < nk; ++z) pz[z] += p * std::norm(w[h * nk + z]);
  }
  RVec out = RVec::Zero(s.outcome_bins.size());
  for (int d = 0; d < s.outcome_bins.size(); ++d)
    for (int z : s.preimage(d)) out[d] += pz[z];
  return out;
}

}  // namespace

TEST_CASE("Heisenberg conjugate of a dense observable matches the Pade exponential") {
  const LatticeSpace h = make_lattice(1, {8}, {4.0}), k = make_lattice(1, {8}, {4.0});
  const MeasurementScheme s = position_scheme(h, k, 0.7, pointer_state(k, 0.8));
  std::mt19937_64 rng(21);
  const CMat t = random_hermitian(8, rng);
  const CMat w = oracle::unitary(oracle::kron(oracle::position(8, 4.0), oracle::momentum(8, 4.0)), 0.7);
  const CMat ref = w.adjoint() * oracle::kron(t, oracle::eye(8)) * w;
  CHECK(max_entry(heisenberg_conjugate(s, LinearOperator::dense(h, t)).to_dense() - ref) < 1e-10);
  // Anything diagonal in position is untouched.
  const LinearOperator x = position_operator(h, 0);
  CHECK(max_entry(heisenberg_conjugate(s, x).to_dense() - oracle::kron(x.to_dense(), oracle::eye(8))) < 1e-12);
}

TEST_CASE("reduced evolution shifts momentum by the mean apparatus momentum") {
  const LatticeSpace h = make_lattice(1, {64}, {16.0}), k = make_lattice(1, {64}, {16.0});
  const DensityState chi = pointer_state(k, 1.0, 1.2);
  const double mean_y = chi.expectation(momentum_operator(k, 0)).real();
  const LinearOperator p = momentum_operator(h, 0);
  // Couplings that keep kicks on the momentum lattice; probes stay far from the band edge.
  for (double kappa : {0.0, 1.0, 2.0}) {
    const MeasurementScheme s = position_scheme(h, k, kappa, chi);
    const LinearOperator got = reduced_evolution(s, p);
    for (double p0 : {-0.8, 0.0, 1.5}) {
      const DensityState probe(gaussian_state(h, {0.4}, {0.8}, {p0}));
      const double want = probe.expectation(p).real() - kappa * mean_y;
      CHECK(std::abs(probe.expectation(got).real() - want) < 1e-9);
    }
  }
  const MeasurementScheme s0 = position_scheme(h, k, 0.0, chi);
  std::mt19937_64 rng(4);
  const LinearOperator t = LinearOperator::dense(h, random_hermitian(64, rng));
  CHECK(max_entry(reduced_evolution(s0, t).to_dense() - t.to_dense()) < 1e-12);
}

TEST_CASE("instrument dual against the dense composite formula") {
  const LatticeSpace h = make_lattice(1, {8}, {4.0}), k = make_lattice(1, {8}, {4.0});
  const MeasurementScheme s = position_scheme(h, k, 1.0, pointer_state(k, 0.7, 0.4));
  const CMat w = oracle::unitary(oracle::kron(oracle::position(8, 4.0), oracle::momentum(8, 4.0)), 1.0);
  const CMat omega = s.apparatus.matrix();
  std::mt19937_64 rng(7);
  const CMat t = random_hermitian(8, rng);
  double worst = 0.0, unital = 0.0;
  CMat total = CMat::Zero(8, 8);
  for (int d = 0; d < s.outcome_bins.size(); ++d) {
    CMat ez = CMat::Zero(8, 8);
    for (int z : s.preimage(d)) ez(z, z) = 1.0;
    const CMat ref = reduce_with(w.adjoint() * oracle::kron(t, ez) * w, omega, 8, 8);
    worst = std::max(worst, max_entry(instrument_dual(s, d, LinearOperator::dense(h, t)).to_dense() - ref));
    total += instrument_dual(s, d, LinearOperator::identity(h)).to_dense();
  }
  unital = max_entry(total - CMat::Identity(8, 8));
  CHECK(worst < 1e-10);
  CHECK(unital < 1e-10);
}

TEST_CASE("instrument dual is the adjoint of the state-update instrument") {
  const LatticeSpace h = make_lattice(1, {8}, {4.0}), k = make_lattice(1, {8}, {4.0});
  const MeasurementScheme s = position_scheme(h, k, 1.0, pointer_state(k, 0.9));
  const CMat w = oracle::unitary(oracle::kron(oracle::position(8, 4.0), oracle::momentum(8, 4.0)), 1.0);
  const auto corpus = state_corpus(h, 13, 2, 1);
  std::mt19937_64 rng(8);
  const CMat t = random_hermitian(8, rng);
  double worst = 0.0;
  for (const auto& rho : corpus) {
    const CMat joint = w * oracle::kron(rho.matrix(), s.apparatus.matrix()) * w.adjoint();
    for (int d = 0; d < s.outcome_bins.size(); ++d) {
      CMat ez = CMat::Zero(8, 8);
      for (int z : s.preimage(d)) ez(z, z) = 1.0;
      const CMat pz = oracle::kron(oracle::eye(8), ez);
      const CMat updated = oracle::partial_trace_second(pz * joint * pz, 8, 8);
      const cplx lhs = rho.expectation(instrument_dual(s, d, LinearOperator::dense(h, t)));
      worst = std::max(worst, std::abs(lhs - (updated * t).trace()));
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("commuting pointer gives outcome weights times the identity") {
  const LatticeSpace h = make_lattice(1, {16}, {8.0}), k = make_lattice(1, {16}, {8.0});
  const MeasurementScheme s = position_scheme(h, k, 1.0, pointer_state(k, 1.1), PointerRelation::Commuting);
  const CVec chi = s.apparatus.pure_vector();
  for (int d = 0; d < s.outcome_bins.size(); ++d) {
    double weight = 0.0;
    for (int z : s.preimage(d)) weight += std::norm(chi[z]);
    CHECK(max_entry(instrument_dual(s, d, LinearOperator::identity(h)).to_dense() -
                    weight * CMat::Identity(16, 16)) < 1e-12);
  }
}

TEST_CASE("measured observable reproduces composite statistics on 64-point grids") {
  const LatticeSpace h = make_lattice(1, {64}, {16.0}), k = make_lattice(1, {64}, {16.0});
  const MeasurementScheme s = position_scheme(h, k, 1.0, pointer_state(k, 1.0, 0.3));
  const MeasuredObservable mo = measured_observable(s);
  CHECK(mo.snap_error < 1e-12);
  CHECK(mo.povm.check().completeness < 1e-10);
  CHECK(mo.povm.check().min_eigenvalue > -1e-12);
  const auto corpus = state_corpus(h, 5, 5, 2);
  double formula = 0.0, library = 0.0;
  for (const auto& rho : corpus) {
    const RVec ref = composite_oracle(s, rho, 64, 16.0, 64, 16.0);
    formula = std::max(formula, (probabilities(mo.povm, rho).weights - ref).cwiseAbs().maxCoeff());
    library = std::max(library, (composite_statistics(s, rho) - ref).cwiseAbs().maxCoeff());
  }
  CHECK(formula < 1e-8);
  CHECK(library < 1e-8);
  CHECK(reproducibility_residual(s, mo.povm, corpus) < 1e-8);
}

TEST_CASE("zero coupling measures a multiple of the identity") {
  const LatticeSpace h = make_lattice(1, {32}, {16.0}), k = make_lattice(1, {32}, {16.0});
  const MeasurementScheme s = position_scheme(h, k, 0.0, pointer_state(k, 1.0));
  const MeasuredObservable mo = measured_observable(s);
  const CVec chi = s.apparatus.pure_vector();
  for (int d = 0; d < mo.povm.size(); ++d) {
    double weight = 0.0;
    for (int z : s.preimage(d)) weight += std::norm(chi[z]);
    CHECK(max_entry(mo.povm.effect(d).to_dense() - weight * CMat::Identity(32, 32)) < 1e-10);
  }
}

TEST_CASE("own observable beats the sharp observable on reproducibility") {
  const LatticeSpace h = make_lattice(1, {32}, {16.0}), k = make_lattice(1, {32}, {16.0});
  const MeasurementScheme s = position_scheme(h, k, 1.0, pointer_state(k, 1.0));
  const auto corpus = state_corpus(h, 2, 5, 2);
  const double own = reproducibility_residual(s, measured_observable(s).povm, corpus);
  const double sharp = reproducibility_residual(s, pvm_of_operator(position_operator(h, 0), s.outcome_bins), corpus);
  CHECK(own < 1e-8);
  CHECK(sharp > 1e-3);
}

TEST_CASE("Kraus family is complete and reproduces the instrument") {
  const LatticeSpace h = make_lattice(1, {16}, {8.0}), k = make_lattice(1, {16}, {8.0});
  const WaveFunction a = gaussian_state(k, {0.0}, {0.8}), b = gaussian_state(k, {1.0}, {1.2}, {0.5});
  const CMat omega = 0.3 * DensityState(a).matrix() + 0.7 * DensityState(b).matrix();
  for (const DensityState& chi : {DensityState(a), DensityState(k, omega)}) {
    const MeasurementScheme s = position_scheme(h, k, 1.0, chi);
    const KrausFamily fam = kraus_family(s);
    CMat sum = CMat::Zero(16, 16);
    for (const auto& op : fam.ops) sum += op.to_dense().adjoint() * op.to_dense();
    CHECK(max_entry(sum - CMat::Identity(16, 16)) < 1e-10);
    std::mt19937_64 rng(3);
    const LinearOperator t = LinearOperator::dense(h, random_hermitian(16, rng));
    double worst = 0.0;
    for (int d = 0; d < s.outcome_bins.size(); ++d)
      worst = std::max(worst, max_entry(kraus_dual(fam, d, t).to_dense() - instrument_dual(s, d, t).to_dense()));
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("sequential measurement marginals") {
  const LatticeSpace h = make_lattice(1, {32}, {16.0}), k = make_lattice(1, {32}, {16.0});
  const MeasurementScheme s = position_scheme(h, k, 1.0, pointer_state(k, 1.0, 1.2));
  const MeasuredObservable mo = measured_observable(s);
  const double dp = 2 * kPi / 16.0;
  const Pvm ep = pvm_of_operator(momentum_operator(h, 0), OutcomeBinning::centered(-15, 16, dp));
  const Pvm ex = pvm_of_operator(position_operator(h, 0), s.outcome_bins);

  const BiObservable fp = sequential_joint(s, ep);
  CHECK(povm_distance(fp.marginal_first(), mo.povm) < 1e-10);
  CHECK(povm_distance(sequential_joint(s, ex).marginal_second(), ex) < 1e-10);
  CHECK(povm_distance(fp.marginal_second(), ep) > 1e-3);
  CHECK(povm_distance(fp.marginal_second(), smear(ep, momentum_kick_law(s))) < 1e-8);

  // Second marginal against the reduced state of the composite evolution.
  const CVec chi = s.apparatus.pure_vector();
  const CMat f = oracle::dft(32);
  double worst = 0.0;
  for (const auto& rho : state_corpus(h, 9, 3, 0)) {
    const CVec v = couple(oracle::kron(rho.pure_vector(), chi), 32, 16.0, 32, 16.0, 1.0);
    const CMat red = oracle::partial_trace_second(v * v.adjoint(), 32, 32);
    const CMat mom = f * red * f.adjoint();
    RVec ref = RVec::Zero(32);
    for (int slot = 0; slot < 32; ++slot) {
      const int fr = slot <= 16 ? slot : slot - 32;
      ref[fr + 15] += mom(slot, slot).real();
    }
    worst = std::max(worst, (probabilities(fp.marginal_second(), rho).weights - ref).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("momentum kick law is the reflected apparatus momentum law") {
  const LatticeSpace h = make_lattice(1, {32}, {16.0}), k = make_lattice(1, {32}, {16.0});
  const MeasurementScheme s = position_scheme(h, k, 1.0, pointer_state(k, 0.7, 1.2));
  const ProbabilityMeasureGrid law = momentum_kick_law(s);
  const CVec chit = oracle::dft(32) * s.apparatus.pure_vector();
  CHECK(law.total() == doctest::Approx(1.0).epsilon(1e-12));
  for (int slot = 0; slot < 32; ++slot) {
    const double y = oracle::freq(slot, 32, 16.0);
    int b = law.binning.locate(-y);
    if (b < 0) b = law.binning.locate(-y + 2 * kPi / 0.5);  // Nyquist folds onto +pi/a
    REQUIRE(b >= 0);
    CHECK(std::abs(law.weights[b] - std::norm(chit[slot])) < 1e-12);
  }
  CHECK(law.mean() == doctest::Approx(-1.2).epsilon(1e-3));
  CHECK_THROWS_AS(momentum_kick_law(position_scheme(h, k, 0.3, s.apparatus)), PreconditionError);
}

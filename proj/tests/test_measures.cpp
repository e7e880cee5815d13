#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "oracles.hpp"
#include "warplab/measurement.hpp"

using namespace warplab;

namespace {

double max_entry(const CMat& m) { return m.cwiseAbs().maxCoeff(); }

// Sum of effects minus identity, dense.
double completeness(const Povm& p) {
  CMat s = CMat::Zero(p.space().size(), p.space().size());
  for (const auto& e : p.effects()) s += e.to_dense();
  return max_entry(s - CMat::Identity(s.rows(), s.cols()));
}

ProbabilityMeasureGrid gaussian_law(int n, double width, double sigma, double mean_bins) {
  RVec w(n);
  for (int i = 0; i < n; ++i) {
    const double k = i - n / 2;
    w[i] = std::exp(-0.5 * std::pow((k - mean_bins) / sigma, 2));
  }
  w /= w.sum();
  return offset_measure(w, -n / 2, width);
}

}  // namespace

TEST_CASE("PVM of position on unit bins") {
  const LatticeSpace line = make_lattice(1, {8}, {8.0});
  const Pvm e = pvm_of_operator(position_operator(line, 0), lattice_bins(line));
  REQUIRE(e.size() == 8);
  for (int i = 0; i < 8; ++i) {
    const CMat m = e.effect(i).to_dense();
    CHECK(m.trace().real() == doctest::Approx(1.0));
    CHECK(std::abs(m(i, i) - 1.0) < 1e-14);
  }
  const PovmReport r = e.check();
  CHECK(r.completeness < 1e-10);
  CHECK(r.idempotency < 1e-10);
  CHECK(r.orthogonality < 1e-10);
}

TEST_CASE("PVM of momentum on two half lines") {
  const LatticeSpace line = make_lattice(1, {16}, {8.0});
  RVec edges(3);
  edges << -10.0, 0.0, 10.0;
  const Pvm e = pvm_of_operator(momentum_operator(line, 0), OutcomeBinning::from_edges(edges));
  CHECK(completeness(e) < 1e-12);
  const CMat a = e.effect(0).to_dense(), b = e.effect(1).to_dense();
  CHECK(max_entry(a * b) < 1e-12);
  CHECK(max_entry(a * a - a) < 1e-12);
}

TEST_CASE("PVM of a dense Hermitian matrix against its eigendecomposition") {
  const LatticeSpace s = make_lattice(1, {6}, {6.0});
  std::mt19937_64 rng(11);
  const CMat h = random_hermitian(6, rng);
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  const double lo = es.eigenvalues().minCoeff() - 0.1, hi = es.eigenvalues().maxCoeff() + 0.1;
  const Pvm e = pvm_of_operator(LinearOperator::dense(s, h), OutcomeBinning::uniform(3, lo, (hi - lo) / 3));
  CHECK(completeness(e) < 1e-10);
  CMat recon = CMat::Zero(6, 6);
  for (int i = 0; i < 3; ++i) {
    const CMat m = e.effect(i).to_dense();
    CHECK(max_entry(m * m - m) < 1e-10);
    CMat ref = CMat::Zero(6, 6);
    for (int j = 0; j < 6; ++j) {
      const double v = es.eigenvalues()[j];
      if (v >= lo + i * (hi - lo) / 3 && v < lo + (i + 1) * (hi - lo) / 3)
        ref += es.eigenvectors().col(j) * es.eigenvectors().col(j).adjoint();
    }
    CHECK(max_entry(m - ref) < 1e-10);
  }
}

TEST_CASE("PVM construction reports an uncovered spectrum") {
  const LatticeSpace line = make_lattice(1, {8}, {8.0});
  CHECK_THROWS(pvm_of_operator(position_operator(line, 0), OutcomeBinning::uniform(4, -0.5, 1.0)));
}

TEST_CASE("smearing by point masses") {
  const LatticeSpace line = make_lattice(1, {16}, {16.0});
  const Pvm e = pvm_of_operator(position_operator(line, 0), lattice_bins(line));
  RVec delta = RVec::Zero(16);
  delta[8] = 1.0;  // offset 0
  CHECK(povm_distance(smear(e, offset_measure(delta, -8, 1.0)), e) < 1e-15);
  RVec shifted = RVec::Zero(16);
  shifted[8 + 3] = 1.0;  // offset +3 bins
  const Povm s = smear(e, offset_measure(shifted, -8, 1.0));
  for (int m = 0; m < 16; ++m) CHECK(effect_distance(s.effect(m), e.effect((m + 13) % 16)) < 1e-15);
}

TEST_CASE("smearing against the direct double sum on 64 bins") {
  const LatticeSpace line = make_lattice(1, {64}, {64.0});
  const Pvm e = pvm_of_operator(position_operator(line, 0), lattice_bins(line));
  const ProbabilityMeasureGrid mu = gaussian_law(64, 1.0, 2.5, 1.0);
  const Povm s = smear(e, mu);
  double worst = 0.0;
  for (int m = 0; m < 64; ++m) {
    CMat ref = CMat::Zero(64, 64);
    for (int n = 0; n < 64; ++n) {
      int off = ((m - n) % 64 + 64) % 64;  // offset m - n, periodic, stored from -32
      if (off >= 32) off -= 64;
      ref += mu.weights[off + 32] * e.effect(n).to_dense();
    }
    worst = std::max(worst, max_entry(s.effect(m).to_dense() - ref));
  }
  CHECK(worst < 1e-10);
  CHECK(s.check().completeness < 1e-10);
  CHECK(s.check().min_eigenvalue > -1e-12);
  // Away from the periodic seam the first moment moves by the mean of the law.
  const CMat x = position_operator(line, 0).to_dense(), m1 = first_moment(s).to_dense();
  for (int j = 20; j < 44; ++j) CHECK(std::abs(m1(j, j) - x(j, j) - mu.mean()) < 1e-8);
  CHECK(max_entry(m1 - CMat(m1.diagonal().asDiagonal())) < 1e-12);
}

TEST_CASE("smearing is a convolution semigroup and keeps the commutant") {
  const LatticeSpace line = make_lattice(1, {32}, {32.0});
  const Pvm e = pvm_of_operator(position_operator(line, 0), lattice_bins(line));
  const ProbabilityMeasureGrid mu = gaussian_law(32, 1.0, 1.2, 0.0);
  const ProbabilityMeasureGrid nu = gaussian_law(32, 1.0, 0.8, 2.0);
  RVec conv = RVec::Zero(32);
  for (int i = 0; i < 32; ++i)
    for (int j = 0; j < 32; ++j) {
      int k = (i - 16) + (j - 16);
      k = ((k + 16) % 32 + 32) % 32;
      conv[k] += mu.weights[i] * nu.weights[j];
    }
  const Povm lhs = smear(smear(e, mu), nu);
  const Povm rhs = smear(e, offset_measure(conv, -16, 1.0));
  CHECK(povm_distance(lhs, rhs) < 1e-9);
  const CMat x = position_operator(line, 0).to_dense();
  double comm = 0.0;
  for (const auto& eff : lhs.effects()) {
    const CMat m = eff.to_dense();
    comm = std::max(comm, max_entry(x * m - m * x));
  }
  CHECK(comm < 1e-10);
}

TEST_CASE("Born weights") {
  const LatticeSpace line = make_lattice(1, {8}, {8.0});
  const Pvm e = pvm_of_operator(position_operator(line, 0), lattice_bins(line));
  const ProbabilityMeasureGrid p = probabilities(e, DensityState(position_delta(line, 5)));
  CHECK(p.weights[5] == doctest::Approx(1.0));
  CHECK(p.total() == doctest::Approx(1.0));

  const Povm one(line, OutcomeBinning::uniform(1, -4.5, 9.0), {LinearOperator::identity(line)}, false);
  std::mt19937_64 rng(3);
  const CVec v = random_unit_vector(8, rng);
  const DensityState st(WaveFunction::from_unit_vector(line, v));
  CHECK(probabilities(one, st).weights[0] == doctest::Approx(1.0));

  // Random four-effect POVM: S^{-1/2} A_i S^{-1/2}.
  std::vector<CMat> a;
  CMat s = CMat::Zero(8, 8);
  for (int i = 0; i < 4; ++i) {
    const CMat b = CMat::Random(8, 8);
    a.push_back(b * b.adjoint());
    s += a.back();
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(s);
  const CMat isq = es.operatorInverseSqrt();
  std::vector<LinearOperator> effects;
  for (const auto& m : a) effects.push_back(LinearOperator::dense(line, isq * m * isq));
  const Povm rp(line, OutcomeBinning::uniform(4, 0.0, 1.0), effects, false);
  const ProbabilityMeasureGrid w = probabilities(rp, st);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(w.weights[i] - v.dot(effects[i].to_dense() * v).real()) < 1e-10);
  CHECK(w.total() == doctest::Approx(1.0).epsilon(1e-10));

  // Pure-state PVM weights are |amplitude|^2 sums.
  const ProbabilityMeasureGrid q = probabilities(e, st);
  for (int i = 0; i < 8; ++i) CHECK(std::abs(q.weights[i] - std::norm(v[i])) < 1e-12);
}

TEST_CASE("first moments") {
  const LatticeSpace line = make_lattice(1, {8}, {8.0});
  const Pvm e = pvm_of_operator(position_operator(line, 0), lattice_bins(line));
  CHECK(max_entry(first_moment(e).to_dense() - position_operator(line, 0).to_dense()) <= 0.5);
  const Povm one(line, OutcomeBinning::centered(0, 0, 1.0, 2.5), {LinearOperator::identity(line)}, false);
  CHECK(max_entry(first_moment(one).to_dense() - 2.5 * CMat::Identity(8, 8)) < 1e-15);
}

TEST_CASE("reading the scale with simple pointers") {
  const LatticeSpace line = make_lattice(1, {8}, {8.0});
  const Pvm e = pvm_of_operator(position_operator(line, 0), lattice_bins(line));
  CHECK(povm_distance(read_scale(e, PointerFunction::identity(8), e.binning()), e) < 1e-15);
  const Povm c = read_scale(e, PointerFunction::collapse(8), OutcomeBinning::uniform(1, -4.5, 8.0));
  REQUIRE(c.size() == 1);
  CHECK(effect_distance(c.effect(0), LinearOperator::identity(line)) < 1e-14);
}

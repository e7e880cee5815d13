#include <algorithm>
#include <cmath>

#include "warplab/electro.hpp"

namespace warplab {

ShiftLaw energy_shift_law(const LatticeSpace& h, const LatticeSpace& k, const CVec& psi_tilde, double b,
                          double m, double width) {
  require(h.dims() == 2 && k.dims() == 2, "energy smearing runs on a 2D system and pointer");
  require(b != 0.0, "field strength must be nonzero");
  require(m > 0.0 && width > 0.0, "mass and bin width must be positive");
  require(static_cast<std::size_t>(psi_tilde.size()) == k.size(), "pointer wave function has wrong size");
  const double norm = psi_tilde.squaredNorm();
  require(norm > 0.0, "pointer wave function vanishes");

  const RVec y1 = k.position_grid(0), y2 = k.position_grid(1);
  const double dp[2] = {2.0 * kPi / h.length(0), 2.0 * kPi / h.length(1)};
  const int half[2] = {h.points(0) / 2, h.points(1) / 2};
  std::vector<double> by_offset;
  ShiftLaw out;
  for (std::size_t f = 0; f < k.size(); ++f) {
    const double w = std::norm(psi_tilde[f]) / norm;
    if (w == 0.0) continue;
    // p = B x y for B along the normal.
    const double p[2] = {-b * y2[f], b * y1[f]};
    bool on_lattice = true;
    for (int d = 0; d < 2; ++d) {
      const double q = p[d] / dp[d];
      const long n = std::lround(q);
      on_lattice = on_lattice && std::abs(q - n) <= 1e-9 && n > -half[d] - 1 && n <= half[d];
    }
    if (!on_lattice) {
      out.dropped_mass += w;
      continue;
    }
    const double s = (p[0] * p[0] + p[1] * p[1]) / (2.0 * m);
    const double q = s / width;
    const long n = std::lround(q);
    require(std::abs(q - n) <= 1e-9, "energy shift is not a multiple of the bin width");
    if (static_cast<std::size_t>(n) >= by_offset.size()) by_offset.resize(n + 1, 0.0);
    by_offset[n] += w;
    out.mean_shift += w * s;
  }
  if (out.dropped_mass > 1e-10)
    throw PreconditionError("pointer support escapes the momentum lattice (dropped mass " +
                            format_number(out.dropped_mass) + ")");
  if (by_offset.empty()) by_offset.push_back(0.0);
  out.law = offset_measure(Eigen::Map<const RVec>(by_offset.data(), by_offset.size()), 0, width);
  return out;
}

namespace {
bool occupied(const LinearOperator& e) {
  return effect_distance(e, LinearOperator::identity(e.space(), 0.0)) > 1e-12;
}
}  // namespace

EnergySmearing energy_smearing(const Pvm& h0, const ShiftLaw& shift) {
  EnergySmearing out{smear(h0, shift.law), shift, 0.0};
  const RVec none = RVec::Zero(h0.size());
  for (int n = 0; n < h0.size(); ++n) {
    if (!occupied(h0.effect(n))) continue;
    RVec one = none;
    one[n] = 1.0;
    out.wrap_mass = std::max(out.wrap_mass, smear_wrap_mass(h0.binning(), one, shift.law));
  }
  return out;
}

ScaleReading scale_reading(const Povm& smeared, const OutcomeBinning& intervals, const LinearOperator& h0,
                           double tolerance) {
  std::vector<int> map(smeared.size());
  for (int i = 0; i < smeared.size(); ++i) map[i] = intervals.locate(smeared.binning().reps[i]);
  ScaleReading out;
  out.discrete = read_scale(smeared, PointerFunction::from_map(map, intervals.size()), intervals);
  out.deviation = povm_distance(out.discrete, pvm_of_operator(h0, intervals));

  Eigen::SelfAdjointEigenSolver<CMat> es(h0.to_dense());
  for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j) {
    const int n = intervals.locate(es.eigenvalues()[j]);
    const CVec v = es.eigenvectors().col(j);
    const double kept = n < 0 ? 0.0 : v.dot(out.discrete.effect(n).apply(v)).real();
    out.leakage = std::max(out.leakage, 1.0 - kept);
  }
  out.pass = out.deviation <= tolerance;
  return out;
}

LinearOperator ladder_hamiltonian(const LatticeSpace& line, double omega) {
  require(line.dims() == 1, "ladder Hamiltonian lives on a 1D line");
  const RVec x = line.position_grid(0), p = line.momentum_grid(0);
  const LinearOperator osc = linear_combination(
      {0.5, 0.5}, {LinearOperator::momentum_diagonal(line, RVec(p.array().square())),
                   LinearOperator::position_diagonal(line, RVec(x.array().square()))});
  Eigen::SelfAdjointEigenSolver<CMat> es(osc.to_dense());
  const Eigen::Index n = es.eigenvalues().size();
  RVec levels(n);
  for (Eigen::Index j = 0; j < n; ++j) levels[j] = omega * (j + 0.5);
  const CMat& v = es.eigenvectors();
  return LinearOperator::dense(line, v * levels.cast<cplx>().asDiagonal() * v.adjoint()).tagged_selfadjoint(true);
}

OutcomeBinning momentum_bins(const LatticeSpace& line) {
  require(line.dims() == 1, "momentum bins need a 1D line");
  const int n = line.points(0);
  return OutcomeBinning::centered(-n / 2 + 1, n / 2, 2.0 * kPi / line.length(0));
}

namespace {
// Momentum bin index (ascending momentum) of FFT slot k.
int momentum_slot_bin(int k, int n) {
  const int folded = k <= n / 2 ? k : k - n;
  return folded + n / 2 - 1;
}
}  // namespace

JointMeasurement joint_measurability_construct(const DensityState& t) {
  const LatticeSpace& line = t.space();
  require(line.dims() == 1, "joint measurement runs on a 1D line");
  const int n = line.points(0);
  require(n % 2 == 0 && n <= 64, "joint measurement needs an even line of at most 64 points");
  const CMat rho = t.matrix();
  require((rho - rho.adjoint()).cwiseAbs().maxCoeff() <= 1e-10, "T is not selfadjoint");
  require(std::abs(rho.trace() - cplx(1.0)) <= 1e-10, "T does not have unit trace");
  require(Eigen::SelfAdjointEigenSolver<CMat>(rho).eigenvalues().minCoeff() >= -1e-10, "T is not positive");

  const double a = line.spacing(0);
  const double dp = 2.0 * kPi / line.length(0);
  RVec pos = RVec::Zero(n), mom = RVec::Zero(n);
  for (const auto& [w, v] : t.components()) {
    pos += w * v.cwiseAbs2();
    const CVec vt = to_momentum(line, v);
    for (int k = 0; k < n; ++k) mom[momentum_slot_bin(k, n)] += w * std::norm(vt[k]);
  }

  // S = Pi T Pi with parity i -> -i mod n.
  CMat s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s(i, j) = rho((n - i) % n, (n - j) % n);

  const RVec x = line.position_grid(0);
  const OutcomeBinning qb = lattice_bins(line), pb = momentum_bins(line);
  std::vector<LinearOperator> effects;
  effects.reserve(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    // Translation by x_j, i.e. j - n/2 sites.
    const int sh = ((j - n / 2) % n + n) % n;
    CMat shifted(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) shifted(r, c) = s((r - sh + n) % n, (c - sh + n) % n);
    for (int kb = 0; kb < n; ++kb) {
      const double pk = (kb - n / 2 + 1) * dp;
      const CVec phase = (kI * pk * x).array().exp();
      CMat g = phase.asDiagonal() * shifted * phase.conjugate().asDiagonal();
      effects.push_back(LinearOperator::dense(line, g / static_cast<double>(n)).tagged_selfadjoint(true));
    }
  }
  return {offset_measure(pos, -n / 2, a), offset_measure(mom, -n / 2 + 1, dp),
          BiObservable(qb, pb, std::move(effects))};
}

double marginal_deviation(const BiObservable& g, const ProbabilityMeasureGrid& chi,
                          const ProbabilityMeasureGrid& eta) {
  const LatticeSpace& line = g.effect(0, 0).space();
  const Pvm q = pvm_of_operator(position_operator(line, 0), g.first());
  const Pvm p = pvm_of_operator(momentum_operator(line, 0), g.second());
  return std::max(povm_distance(g.marginal_first(), smear(q, chi)),
                  povm_distance(g.marginal_second(), smear(p, eta)));
}

}  // namespace warplab

#include "warplab/measurement.hpp"

#include <cmath>

namespace warplab {

Pvm MeasurementScheme::pointer_pvm() const { return pvm_of_operator(pointer, pointer_bins); }

std::vector<int> MeasurementScheme::preimage(int outcome) const {
  require(outcome >= 0 && outcome < outcome_bins.size(), "outcome bin out of range");
  std::vector<int> out;
  for (int b = 0; b < static_cast<int>(f.map.size()); ++b)
    if (f.map[b] == outcome) out.push_back(b);
  return out;
}

OutcomeBinning lattice_bins(const LatticeSpace& line) {
  require(line.dims() == 1, "lattice bins need a 1D lattice");
  const int n = line.points(0);
  return OutcomeBinning::centered(-n / 2, n / 2 - 1, line.spacing(0));
}

MeasurementScheme position_scheme(const LatticeSpace& h, const LatticeSpace& k, double kappa,
                                  DensityState apparatus, PointerRelation relation) {
  require(h.dims() == 1 && k.dims() == 1, "position scheme needs 1D system and apparatus");
  require(apparatus.space() == k, "apparatus state must live on K");
  MeasurementScheme s;
  const bool conj = relation == PointerRelation::Conjugate;
  s.space = CompositeSpace(h, k, AxisMask{conj});
  s.xs = {position_operator(h, 0)};
  s.ys = {conj ? momentum_operator(k, 0) : position_operator(k, 0)};
  s.kappa = kappa;
  s.apparatus = std::move(apparatus);
  s.pointer = position_operator(k, 0);
  s.pointer_bins = lattice_bins(k);
  s.outcome_bins = lattice_bins(h);
  s.relation = relation;
  const double lo = s.outcome_bins.edges[0];
  const double span = h.length(0);
  std::vector<int> map(s.pointer_bins.size());
  for (int b = 0; b < s.pointer_bins.size(); ++b) {
    double v = kappa == 0.0 ? s.pointer_bins.reps[b] : s.pointer_bins.reps[b] / kappa;
    v = lo + std::fmod(std::fmod(v - lo, span) + span, span);
    map[b] = s.outcome_bins.locate(v);
  }
  s.f = PointerFunction::from_map(std::move(map), s.outcome_bins.size());
  return s;
}

FiberedOperator coupling_unitary(const MeasurementScheme& s) {
  return fibered_unitary(s.space, s.xs, s.ys, s.kappa);
}

FiberedOperator heisenberg_conjugate(const MeasurementScheme& s, const LinearOperator& t) {
  return conjugate_by(coupling_unitary(s), t);
}

LinearOperator reduced_evolution(const MeasurementScheme& s, const LinearOperator& t) {
  return reduce_fibered(heisenberg_conjugate(s, t), fiber_weights(s.space, s.apparatus))
      .tagged_selfadjoint(t.selfadjoint());
}

namespace {
LinearOperator pointer_projector(const MeasurementScheme& s, int outcome) {
  const auto pre = s.preimage(outcome);
  const Pvm z = s.pointer_pvm();
  std::vector<LinearOperator> ops;
  for (int b : pre) ops.push_back(z.effect(b));
  if (ops.empty()) return LinearOperator::identity(s.space.second(), 0.0);
  return linear_combination(std::vector<cplx>(ops.size(), 1.0), ops);
}
}  // namespace

LinearOperator instrument_dual(const MeasurementScheme& s, int outcome, const LinearOperator& t) {
  require(t.space() == s.space.first(), "operator does not act on the system");
  const LinearOperator e = pointer_projector(s, outcome);
  const FiberedOperator w = coupling_unitary(s);
  const FiberedOperator wd = w.adjoint();
  const auto comps = s.apparatus.components();
  const CompositeSpace cs = s.space;
  const LinearOperator ta = t.adjoint();
  auto act = [=](const CVec& v, bool adj) {
    const std::size_t dk = cs.second().size();
    CVec acc = CVec::Zero(v.size());
    for (const auto& [p, chi] : comps) {
      CVec phi = w.apply(cs.product(v, chi));
      phi = apply_tensor(cs, adj ? &ta : &t, &e, phi);
      phi = wd.apply(phi);
      for (Eigen::Index h = 0; h < v.size(); ++h) acc[h] += p * chi.dot(phi.segment(h * dk, dk));
    }
    return acc;
  };
  return LinearOperator::functional(
      cs.first(), [act](const CVec& v) { return act(v, false); },
      [act](const CVec& v) { return act(v, true); }, t.selfadjoint());
}

MeasuredObservable measured_observable(const MeasurementScheme& s) {
  require(s.relation == PointerRelation::Conjugate,
          "closed-form measured observable needs a pointer conjugate to the coupled generator");
  require(s.xs.size() == 1 && s.xs[0].kind() == LinearOperator::Kind::Diagonal,
          "closed form supports a single diagonal system generator");
  require(s.pointer_bins.is_uniform(), "pointer bins must be uniform");
  const RVec law = probabilities(s.pointer_pvm(), s.apparatus).weights;
  const int nb = s.pointer_bins.size();
  const double w = s.pointer_bins.width(0);
  const LinearOperator& x = s.xs[0];
  const RVec xv = x.diagonal_values().real();
  MeasuredObservable out;
  std::vector<int> shift(xv.size());
  for (Eigen::Index i = 0; i < xv.size(); ++i) {
    const double q = s.kappa * xv[i] / w;
    shift[i] = static_cast<int>(std::lround(q));
    out.snap_error = std::max(out.snap_error, std::abs(q - shift[i]));
  }
  std::vector<LinearOperator> effects;
  for (int o = 0; o < s.outcome_bins.size(); ++o) {
    const auto pre = s.preimage(o);
    CVec vals = CVec::Zero(xv.size());
    for (Eigen::Index i = 0; i < xv.size(); ++i)
      for (int b : pre) vals[i] += law[((b - shift[i]) % nb + nb) % nb];
    effects.push_back(LinearOperator::diagonal(x.space(), vals, x.basis(), x.support(), true));
  }
  out.povm = Povm(x.space(), s.outcome_bins, std::move(effects), false);
  return out;
}

RVec composite_statistics(const MeasurementScheme& s, const DensityState& omega) {
  require(omega.space() == s.space.first(), "state does not live on the system");
  const FiberedOperator w = coupling_unitary(s);
  const std::size_t dh = s.space.first().size(), dk = s.space.second().size();
  CMat rho_k = CMat::Zero(dk, dk);
  for (const auto& [p, psi] : omega.components())
    for (const auto& [q, chi] : s.apparatus.components()) {
      CVec phi = w.apply(s.space.product(psi, chi));
      for (std::size_t h = 0; h < dh; ++h) {
        auto seg = phi.segment(h * dk, dk);
        rho_k.noalias() += (p * q) * seg * seg.adjoint();
      }
    }
  rho_k = 0.5 * (rho_k + rho_k.adjoint());
  rho_k /= rho_k.trace().real();
  const RVec pointer = probabilities(s.pointer_pvm(), DensityState(s.space.second(), rho_k)).weights;
  RVec out = RVec::Zero(s.outcome_bins.size());
  for (int b = 0; b < pointer.size(); ++b)
    if (s.f.map[b] >= 0) out[s.f.map[b]] += pointer[b];
  return out;
}

double reproducibility_residual(const MeasurementScheme& s, const Povm& e,
                                const std::vector<DensityState>& corpus) {
  require(e.size() == s.outcome_bins.size(), "observable binning differs from the outcome bins");
  double worst = 0.0;
  for (const auto& omega : corpus) {
    const RVec a = probabilities(e, omega).weights;
    const RVec b = composite_statistics(s, omega);
    worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
  }
  return worst;
}

KrausFamily kraus_family(const MeasurementScheme& s) {
  const LatticeSpace& h = s.space.first();
  const LatticeSpace& k = s.space.second();
  require(s.pointer.kind() == LinearOperator::Kind::Diagonal && s.pointer.diagonal_in(no_axes(k.dims())),
          "Kraus family needs a position-diagonal pointer");
  const AxisMask hb = common_basis(s.xs);
  AxisMask hsup = no_axes(h.dims());
  for (const auto& x : s.xs)
    for (std::size_t d = 0; d < hsup.size(); ++d) hsup[d] = hsup[d] || x.support()[d];
  std::vector<CVec> xv, yv;
  for (const auto& x : s.xs) xv.push_back(x.rebased(hb).diagonal_values());
  for (const auto& y : s.ys) yv.push_back(y.rebased(s.space.fiber_basis()).diagonal_values());
  const RVec zv = s.pointer.rebased(no_axes(k.dims())).diagonal_values().real();
  std::vector<int> zbin(k.size());
  for (std::size_t z = 0; z < k.size(); ++z) {
    zbin[z] = s.pointer_bins.locate(zv[z]);
    require(zbin[z] >= 0, "pointer point outside the pointer bins");
  }
  KrausFamily fam;
  for (const auto& [p, chi] : s.apparatus.components()) {
    const CVec chif = to_basis(k, s.space.fiber_basis(), chi);
    CMat m(h.size(), k.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
      CVec phase = CVec::Zero(k.size());
      for (std::size_t mu = 0; mu < xv.size(); ++mu) phase += xv[mu][i] * yv[mu];
      CVec kv = chif.cwiseProduct((cplx(0.0, -s.kappa) * phase).array().exp().matrix());
      m.row(i) = std::sqrt(p) * from_basis(k, s.space.fiber_basis(), kv).transpose();
    }
    for (std::size_t z = 0; z < k.size(); ++z) {
      fam.ops.push_back(LinearOperator::diagonal(h, m.col(z), hb, hsup, false));
      fam.outcome.push_back(s.f.map[zbin[z]]);
    }
  }
  return fam;
}

LinearOperator sandwich(const LinearOperator& k, const LinearOperator& t) {
  require(k.kind() == LinearOperator::Kind::Diagonal, "Kraus operator must be diagonal");
  const CVec& kv = k.diagonal_values();
  if (t.kind() == LinearOperator::Kind::Diagonal && t.diagonal_in(k.basis())) {
    CVec tv = t.rebased(k.basis()).diagonal_values();
    CVec v = kv.cwiseAbs2().cast<cplx>().cwiseProduct(tv);
    AxisMask sup = k.support();
    for (std::size_t d = 0; d < sup.size(); ++d) sup[d] = sup[d] || t.support()[d];
    return LinearOperator::diagonal(k.space(), v, k.basis(), sup, t.selfadjoint());
  }
  if (t.kind() == LinearOperator::Kind::Dense && k.diagonal_in(no_axes(k.space().dims()))) {
    CVec pv = k.rebased(no_axes(k.space().dims())).diagonal_values();
    CMat m = pv.conjugate().asDiagonal() * t.dense_matrix() * pv.asDiagonal();
    return LinearOperator::dense(k.space(), m);
  }
  return (k.adjoint() * t * k).tagged_selfadjoint(t.selfadjoint());
}

LinearOperator kraus_dual(const KrausFamily& fam, int outcome, const LinearOperator& t) {
  std::vector<LinearOperator> terms;
  for (std::size_t j = 0; j < fam.ops.size(); ++j)
    if (fam.outcome[j] == outcome) terms.push_back(sandwich(fam.ops[j], t));
  if (terms.empty()) return LinearOperator::identity(t.space(), 0.0);
  return linear_combination(std::vector<cplx>(terms.size(), 1.0), terms).tagged_selfadjoint(t.selfadjoint());
}

BiObservable::BiObservable(OutcomeBinning first, OutcomeBinning second, std::vector<LinearOperator> effects)
    : first_(std::move(first)), second_(std::move(second)), effects_(std::move(effects)) {
  require(static_cast<int>(effects_.size()) == first_.size() * second_.size(),
          "one effect per product bin required");
}

const LinearOperator& BiObservable::effect(int i, int j) const {
  return effects_.at(static_cast<std::size_t>(i) * second_.size() + j);
}

Povm BiObservable::marginal_first() const {
  std::vector<LinearOperator> out;
  for (int i = 0; i < first_.size(); ++i) {
    std::vector<LinearOperator> row;
    for (int j = 0; j < second_.size(); ++j) row.push_back(effect(i, j));
    out.push_back(linear_combination(std::vector<cplx>(row.size(), 1.0), row).tagged_selfadjoint(true));
  }
  return Povm(effects_.front().space(), first_, std::move(out), false);
}

Povm BiObservable::marginal_second() const {
  std::vector<LinearOperator> out;
  for (int j = 0; j < second_.size(); ++j) {
    std::vector<LinearOperator> col;
    for (int i = 0; i < first_.size(); ++i) col.push_back(effect(i, j));
    out.push_back(linear_combination(std::vector<cplx>(col.size(), 1.0), col).tagged_selfadjoint(true));
  }
  return Povm(effects_.front().space(), second_, std::move(out), false);
}

BiObservable sequential_joint(const MeasurementScheme& first, const Povm& second) {
  require(second.space() == first.space.first(), "second observable does not act on the system");
  const KrausFamily fam = kraus_family(first);
  std::vector<LinearOperator> effects;
  for (int i = 0; i < first.outcome_bins.size(); ++i)
    for (int j = 0; j < second.size(); ++j) effects.push_back(kraus_dual(fam, i, second.effect(j)));
  return BiObservable(first.outcome_bins, second.binning(), std::move(effects));
}

ProbabilityMeasureGrid momentum_kick_law(const MeasurementScheme& s) {
  require(s.relation == PointerRelation::Conjugate, "momentum kicks need the conjugate coupling");
  const LatticeSpace& h = s.space.first();
  const LatticeSpace& k = s.space.second();
  require(h.dims() == 1 && k.dims() == 1, "momentum kicks are defined for 1D schemes");
  const double dp = 2.0 * kPi / h.length(0);
  const int n = h.points(0);
  const RVec y = k.momentum_grid(0);
  RVec w = RVec::Zero(n);
  for (const auto& [p, chi] : s.apparatus.components()) {
    const CVec chit = to_momentum(k, chi);
    for (Eigen::Index j = 0; j < chit.size(); ++j) {
      const double q = -s.kappa * y[j] / dp;
      const long m = std::lround(q);
      require(std::abs(q - m) <= 1e-9, "momentum kick is off the system momentum lattice");
      // Fold onto offsets -n/2 + 1 .. n/2.
      long f = ((m + n / 2 - 1) % n + n) % n;
      w[f] += p * std::norm(chit[j]);
    }
  }
  return offset_measure(w, -n / 2 + 1, dp);
}

}  // namespace warplab

#include "warplab/measures.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace warplab {

OutcomeBinning OutcomeBinning::uniform(int count, double lo, double width) {
  require(count > 0 && width > 0.0, "uniform binning needs positive count and width");
  OutcomeBinning b;
  b.edges.resize(count + 1);
  b.reps.resize(count);
  for (int i = 0; i <= count; ++i) b.edges[i] = lo + i * width;
  for (int i = 0; i < count; ++i) b.reps[i] = lo + (i + 0.5) * width;
  return b;
}

OutcomeBinning OutcomeBinning::centered(int first, int last, double width, double origin) {
  require(last >= first, "centered binning needs last >= first");
  return uniform(last - first + 1, origin + (first - 0.5) * width, width);
}

OutcomeBinning OutcomeBinning::from_edges(const RVec& edges) {
  require(edges.size() >= 2, "binning needs at least two edges");
  OutcomeBinning b;
  b.edges = edges;
  b.reps.resize(edges.size() - 1);
  for (Eigen::Index i = 0; i + 1 < edges.size(); ++i) {
    require(edges[i + 1] > edges[i], "bin edges must increase");
    b.reps[i] = 0.5 * (edges[i] + edges[i + 1]);
  }
  return b;
}

bool OutcomeBinning::is_uniform(double tol) const {
  for (int i = 1; i < size(); ++i)
    if (std::abs(width(i) - width(0)) > tol * std::max(1.0, std::abs(width(0)))) return false;
  return true;
}

int OutcomeBinning::locate(double v) const {
  if (!(v >= edges[0]) || !(v < edges[size()])) return -1;
  int lo = 0, hi = size();
  while (hi - lo > 1) {
    int mid = (lo + hi) / 2;
    if (v >= edges[mid]) lo = mid; else hi = mid;
  }
  return lo;
}

double ProbabilityMeasureGrid::mean() const { return weights.dot(binning.reps) / total(); }

double ProbabilityMeasureGrid::variance() const {
  const double m = mean();
  return weights.dot((binning.reps.array() - m).square().matrix()) / total();
}

PointerFunction PointerFunction::identity(int n) {
  PointerFunction p;
  p.map.resize(n);
  for (int i = 0; i < n; ++i) p.map[i] = i;
  p.target_count = n;
  p.invertible = true;
  return p;
}

PointerFunction PointerFunction::collapse(int n) {
  PointerFunction p;
  p.map.assign(n, 0);
  p.target_count = 1;
  p.invertible = n == 1;
  return p;
}

PointerFunction PointerFunction::from_map(std::vector<int> map, int target_count) {
  PointerFunction p;
  p.map = std::move(map);
  p.target_count = target_count;
  std::vector<int> hits(target_count, 0);
  bool ok = static_cast<int>(p.map.size()) == target_count;
  for (int t : p.map) {
    require(t >= -1 && t < target_count, "pointer target out of range");
    if (t >= 0) ++hits[t];
    else ok = false;
  }
  for (int h : hits) ok = ok && h == 1;
  p.invertible = ok;
  return p;
}

Povm::Povm(LatticeSpace space, OutcomeBinning binning, std::vector<LinearOperator> effects, bool sharp)
    : space_(std::move(space)), binning_(std::move(binning)), effects_(std::move(effects)), sharp_(sharp) {
  require(static_cast<int>(effects_.size()) == binning_.size(), "one effect per bin required");
  for (const auto& e : effects_) require(e.space() == space_, "effect lives on a different space");
}

PovmReport Povm::check() const {
  PovmReport r;
  r.min_eigenvalue = std::numeric_limits<double>::infinity();
  r.max_eigenvalue = -std::numeric_limits<double>::infinity();
  const std::size_t n = space_.size();
  const bool dense_ok = n <= 1024;
  bool all_diag = true;
  for (const auto& e : effects_) all_diag = all_diag && e.kind() == LinearOperator::Kind::Diagonal;
  if (all_diag) {
    LinearOperator total = linear_combination(std::vector<cplx>(effects_.size(), 1.0), effects_);
    if (total.kind() == LinearOperator::Kind::Diagonal)
      r.completeness = (total.diagonal_values().array() - 1.0).abs().maxCoeff();
    else
      all_diag = false;
  }
  if (!all_diag) {
    if (dense_ok) {
      CMat s = CMat::Zero(n, n);
      for (const auto& e : effects_) s += e.to_dense();
      r.completeness = (s - CMat::Identity(n, n)).cwiseAbs().maxCoeff();
    } else {
      std::mt19937_64 rng(7);
      CVec v = random_unit_vector(n, rng);
      CVec s = CVec::Zero(n);
      for (const auto& e : effects_) s += e.apply(v);
      r.completeness = (s - v).cwiseAbs().maxCoeff();
    }
  }
  for (const auto& e : effects_) {
    RVec ev;
    if (e.kind() == LinearOperator::Kind::Diagonal) {
      ev = e.diagonal_values().real();
      const double im = e.diagonal_values().imag().cwiseAbs().maxCoeff();
      r.min_eigenvalue = std::min(r.min_eigenvalue, -im);
    } else if (n <= 256) {
      CMat m = e.to_dense();
      ev = Eigen::SelfAdjointEigenSolver<CMat>(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly).eigenvalues();
    } else {
      continue;
    }
    r.min_eigenvalue = std::min(r.min_eigenvalue, ev.minCoeff());
    r.max_eigenvalue = std::max(r.max_eigenvalue, ev.maxCoeff());
  }
  if (sharp_ && dense_ok) {
    std::vector<CMat> d;
    for (const auto& e : effects_) d.push_back(e.to_dense());
    for (std::size_t i = 0; i < d.size(); ++i) {
      r.idempotency = std::max(r.idempotency, (d[i] * d[i] - d[i]).cwiseAbs().maxCoeff());
      for (std::size_t j = i + 1; j < d.size(); ++j)
        r.orthogonality = std::max(r.orthogonality, (d[i] * d[j]).cwiseAbs().maxCoeff());
    }
  }
  return r;
}

LinearOperator spectral_window(const LatticeSpace& space, const RVec& evals, const CMat& evecs,
                               double lo, double hi, double shift) {
  CMat p = CMat::Zero(space.size(), space.size());
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    const double e = evals[i] + shift;
    if (e >= lo && e < hi) p += evecs.col(i) * evecs.col(i).adjoint();
  }
  return LinearOperator::dense(space, p);
}

Pvm pvm_of_operator(const LinearOperator& op, const OutcomeBinning& binning) {
  const auto& s = op.space();
  std::vector<LinearOperator> effects;
  int uncovered = 0;
  if (op.kind() == LinearOperator::Kind::Diagonal) {
    const CVec& v = op.diagonal_values();
    require(v.imag().cwiseAbs().maxCoeff() <= 1e-12, "operator spectrum is not real");
    std::vector<CVec> ind(binning.size(), CVec::Zero(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const int b = binning.locate(v[i].real());
      if (b < 0) ++uncovered; else ind[b][i] = 1.0;
    }
    if (uncovered > 0)
      throw PreconditionError("binning does not cover the spectrum: " + std::to_string(uncovered) +
                              " eigenvalue(s) uncovered");
    for (auto& c : ind) effects.push_back(LinearOperator::diagonal(s, c, op.basis(), op.support(), true));
  } else {
    CMat m = op.to_dense();
    require((m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-10, "operator is not selfadjoint");
    Eigen::SelfAdjointEigenSolver<CMat> es(m);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      if (binning.locate(es.eigenvalues()[i]) < 0) ++uncovered;
    if (uncovered > 0)
      throw PreconditionError("binning does not cover the spectrum: " + std::to_string(uncovered) +
                              " eigenvalue(s) uncovered");
    for (int b = 0; b < binning.size(); ++b)
      effects.push_back(spectral_window(s, es.eigenvalues(), es.eigenvectors(), binning.edges[b],
                                        binning.edges[b + 1]));
  }
  return Pvm(s, binning, std::move(effects), true);
}

namespace {
std::vector<int> integer_offsets(const OutcomeBinning& target, const ProbabilityMeasureGrid& mu) {
  require(target.is_uniform(), "smearing needs a uniform outcome binning");
  const double w = target.width(0);
  std::vector<int> off(mu.binning.size());
  for (int s = 0; s < mu.binning.size(); ++s) {
    const double q = mu.binning.reps[s] / w;
    off[s] = static_cast<int>(std::lround(q));
    require(std::abs(q - off[s]) <= 1e-9, "measure support is not on the outcome lattice");
  }
  return off;
}
}  // namespace

Povm smear(const Povm& e, const ProbabilityMeasureGrid& mu) {
  const auto off = integer_offsets(e.binning(), mu);
  const int nb = e.size();
  std::vector<std::vector<cplx>> coeff(nb, std::vector<cplx>(nb, 0.0));
  for (int n = 0; n < nb; ++n)
    for (int s = 0; s < mu.binning.size(); ++s) {
      if (mu.weights[s] == 0.0) continue;
      const int m = ((n + off[s]) % nb + nb) % nb;
      coeff[m][n] += mu.weights[s];
    }
  std::vector<LinearOperator> out;
  for (int m = 0; m < nb; ++m) {
    std::vector<cplx> c;
    std::vector<LinearOperator> t;
    for (int n = 0; n < nb; ++n)
      if (coeff[m][n] != cplx(0.0)) {
        c.push_back(coeff[m][n]);
        t.push_back(e.effect(n));
      }
    if (t.empty()) {
      out.push_back(LinearOperator::identity(e.space(), 0.0));
    } else {
      out.push_back(linear_combination(c, t).tagged_selfadjoint(true));
    }
  }
  return Povm(e.space(), e.binning(), std::move(out), false);
}

double smear_wrap_mass(const OutcomeBinning& b, const RVec& occ, const ProbabilityMeasureGrid& mu) {
  const auto off = integer_offsets(b, mu);
  double m = 0.0;
  for (int n = 0; n < b.size(); ++n)
    for (int s = 0; s < mu.binning.size(); ++s) {
      const int t = n + off[s];
      if (t < 0 || t >= b.size()) m += occ[n] * mu.weights[s];
    }
  return m;
}

ProbabilityMeasureGrid probabilities(const Povm& obs, const DensityState& state) {
  require(obs.space() == state.space(), "state and observable live on different spaces");
  ProbabilityMeasureGrid p;
  p.binning = obs.binning();
  p.weights.resize(obs.size());
  for (int i = 0; i < obs.size(); ++i) {
    double w = state.expectation(obs.effect(i)).real();
    if (w < -1e-8) throw NumericalError("effect expectation below -1e-8 (bin " + std::to_string(i) + ")");
    if (w < 0.0) {
      if (w < -1e-12) ++p.clamped;
      w = 0.0;
    }
    p.weights[i] = w;
  }
  return p;
}

LinearOperator first_moment(const Povm& obs) {
  std::vector<cplx> c(obs.size());
  for (int i = 0; i < obs.size(); ++i) c[i] = obs.binning().reps[i];
  return linear_combination(c, obs.effects()).tagged_selfadjoint(true);
}

Povm read_scale(const Povm& obs, const PointerFunction& pointer, const OutcomeBinning& target) {
  require(static_cast<int>(pointer.map.size()) == obs.size(), "pointer not defined on every bin");
  require(target.size() == pointer.target_count, "target binning size differs from pointer range");
  std::vector<std::vector<LinearOperator>> groups(target.size());
  for (int i = 0; i < obs.size(); ++i) {
    const int t = pointer.map[i];
    if (t < 0) {
      // An unmapped bin is only allowed if it carries no operator weight.
      require(effect_distance(obs.effect(i), LinearOperator::identity(obs.space(), 0.0)) <= 1e-12,
              "pointer not total on occupied bin " + std::to_string(i));
      continue;
    }
    groups[t].push_back(obs.effect(i));
  }
  std::vector<LinearOperator> out;
  for (auto& g : groups) {
    if (g.empty()) out.push_back(LinearOperator::identity(obs.space(), 0.0));
    else out.push_back(linear_combination(std::vector<cplx>(g.size(), 1.0), g).tagged_selfadjoint(true));
  }
  return Povm(obs.space(), target, std::move(out), obs.sharp() && pointer.invertible);
}

ProbabilityMeasureGrid offset_measure(const RVec& w, int first_offset, double width) {
  ProbabilityMeasureGrid m;
  m.binning = OutcomeBinning::centered(first_offset, first_offset + static_cast<int>(w.size()) - 1, width);
  m.weights = w;
  return m;
}

double effect_distance(const LinearOperator& a, const LinearOperator& b) {
  require(a.space() == b.space(), "effects live on different spaces");
  if (a.kind() == LinearOperator::Kind::Diagonal && b.kind() == LinearOperator::Kind::Diagonal &&
      b.diagonal_in(a.basis()))
    return (a.diagonal_values() - b.rebased(a.basis()).diagonal_values()).cwiseAbs().maxCoeff();
  if (a.dim() <= 1024) return (a.to_dense() - b.to_dense()).cwiseAbs().maxCoeff();
  std::mt19937_64 rng(11);
  double worst = 0.0;
  for (int t = 0; t < 4; ++t) {
    CVec v = random_unit_vector(a.dim(), rng);
    worst = std::max(worst, (a.apply(v) - b.apply(v)).cwiseAbs().maxCoeff());
  }
  return worst;
}

double povm_distance(const Povm& a, const Povm& b) {
  require(a.size() == b.size(), "POVMs have different bin counts");
  double worst = 0.0;
  for (int i = 0; i < a.size(); ++i) worst = std::max(worst, effect_distance(a.effect(i), b.effect(i)));
  return worst;
}

}  // namespace warplab

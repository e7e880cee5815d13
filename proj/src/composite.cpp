#include "warplab/composite.hpp"

namespace warplab {

CompositeSpace::CompositeSpace(LatticeSpace first, LatticeSpace second, AxisMask fiber_basis)
    : first_(std::move(first)), second_(std::move(second)), basis_(std::move(fiber_basis)) {
  require(basis_.size() == second_.dims(), "fiber basis must have one entry per axis of K");
  joint_ = first_.joined(second_);
}

AxisMask CompositeSpace::joint_mask() const {
  AxisMask m = no_axes(first_.dims());
  m.insert(m.end(), basis_.begin(), basis_.end());
  return m;
}

CVec CompositeSpace::product(const CVec& h, const CVec& k) const {
  require(static_cast<std::size_t>(h.size()) == first_.size() &&
              static_cast<std::size_t>(k.size()) == second_.size(),
          "product factors do not match composite");
  CVec out(size());
  const std::size_t dk = second_.size();
  for (Eigen::Index i = 0; i < h.size(); ++i) out.segment(i * dk, dk) = h[i] * k;
  return out;
}

FiberedOperator::FiberedOperator(CompositeSpace space, FiberMap fiber)
    : space_(std::move(space)), fiber_(std::move(fiber)) {}

CVec FiberedOperator::apply(const CVec& v) const {
  require(static_cast<std::size_t>(v.size()) == space_.size(), "composite vector size mismatch");
  const AxisMask mask = space_.joint_mask();
  CVec w = to_basis(space_.joint(), mask, v);
  const std::size_t dh = space_.first().size();
  const std::size_t dk = space_.second().size();
  CVec col(dh);
  for (std::size_t y = 0; y < dk; ++y) {
    for (std::size_t h = 0; h < dh; ++h) col[h] = w[h * dk + y];
    CVec r = fiber_(y).apply(col);
    for (std::size_t h = 0; h < dh; ++h) w[h * dk + y] = r[h];
  }
  return from_basis(space_.joint(), mask, w);
}

CMat FiberedOperator::to_dense() const {
  const std::size_t n = space_.size();
  require(n <= 4096, "dense materialization above the cap");
  CMat m(n, n);
  CVec e = CVec::Zero(n);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    m.col(j) = apply(e);
    e[j] = 0.0;
  }
  return m;
}

FiberedOperator FiberedOperator::adjoint() const {
  FiberMap f = fiber_;
  return FiberedOperator(space_, [f](std::size_t y) { return f(y).adjoint(); });
}

FiberedOperator FiberedOperator::compose(const FiberedOperator& rhs) const {
  FiberMap a = fiber_, b = rhs.fiber_;
  return FiberedOperator(space_, [a, b](std::size_t y) { return a(y) * b(y); });
}

void FiberedOperator::apply_product(
    const CVec& h, const CVec& k,
    const std::function<void(std::size_t, cplx, const CVec&)>& sink) const {
  CVec kf = to_basis(space_.second(), space_.fiber_basis(), k);
  for (std::size_t y = 0; y < space_.fiber_count(); ++y) {
    if (kf[y] == cplx(0.0)) continue;
    sink(y, kf[y], fiber_(y).apply(h));
  }
}

CVec apply_tensor(const CompositeSpace& space, const LinearOperator* a, const LinearOperator* b,
                  const CVec& v) {
  require(static_cast<std::size_t>(v.size()) == space.size(), "composite vector size mismatch");
  const std::size_t dh = space.first().size(), dk = space.second().size();
  CVec w = v;
  if (b) {
    require(b->space() == space.second(), "second operator not on K");
    for (std::size_t h = 0; h < dh; ++h) w.segment(h * dk, dk) = b->apply(w.segment(h * dk, dk));
  }
  if (a) {
    require(a->space() == space.first(), "first operator not on H");
    CVec col(dh);
    for (std::size_t k = 0; k < dk; ++k) {
      for (std::size_t h = 0; h < dh; ++h) col[h] = w[h * dk + k];
      CVec r = a->apply(col);
      for (std::size_t h = 0; h < dh; ++h) w[h * dk + k] = r[h];
    }
  }
  return w;
}

RVec fiber_weights(const CompositeSpace& space, const DensityState& state) {
  require(state.space() == space.second(), "state does not live on the second factor");
  const auto& s = space.second();
  RVec w = RVec::Zero(s.size());
  for (const auto& [p, v] : state.components()) {
    CVec vf = to_basis(s, space.fiber_basis(), v);
    w += p * vf.cwiseAbs2();
  }
  return w;
}

LinearOperator reduce_fibered(const FiberedOperator& f, const RVec& weights, double floor) {
  const auto& cs = f.space();
  require(static_cast<std::size_t>(weights.size()) == cs.fiber_count(), "weight count mismatch");
  std::vector<std::size_t> keep;
  const double cut = floor * weights.maxCoeff();
  for (std::size_t y = 0; y < cs.fiber_count(); ++y)
    if (weights[y] > cut || (floor == 0.0 && weights[y] != 0.0)) keep.push_back(y);
  auto run = [f, weights, keep](const CVec& v, bool adj) {
    CVec acc = CVec::Zero(v.size());
    for (std::size_t y : keep) {
      LinearOperator fy = f.fiber(y);
      acc += weights[y] * (adj ? fy.adjoint().apply(v) : fy.apply(v));
    }
    return acc;
  };
  return LinearOperator::functional(
      cs.first(), [run](const CVec& v) { return run(v, false); },
      [run](const CVec& v) { return run(v, true); }, false);
}

double product_residual(const FiberedOperator& f, const FiberedOperator& g, const CVec& h,
                        const CVec& k) {
  return product_residuals(f, g, {{h, k}}).front();
}

std::vector<double> product_residuals(const FiberedOperator& f, const FiberedOperator& g,
                                      const std::vector<std::pair<CVec, CVec>>& vectors) {
  require(f.space().fiber_basis() == g.space().fiber_basis(), "fiber bases differ");
  std::vector<CVec> kf;
  for (const auto& [h, k] : vectors) kf.push_back(to_basis(f.space().second(), f.space().fiber_basis(), k));
  std::vector<double> acc(vectors.size(), 0.0);
  for (std::size_t y = 0; y < f.space().fiber_count(); ++y) {
    bool any = false;
    for (const auto& k : kf) any = any || k[y] != 0.0;
    if (!any) continue;
    const LinearOperator fy = f.fiber(y), gy = g.fiber(y);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      const double w = std::norm(kf[i][y]);
      if (w == 0.0) continue;
      const CVec& h = vectors[i].first;
      acc[i] += w * (fy.apply(h) - gy.apply(h)).squaredNorm();
    }
  }
  for (double& a : acc) a = std::sqrt(a);
  return acc;
}

AxisMask common_basis(const std::vector<LinearOperator>& ops) {
  require(!ops.empty(), "empty generator list");
  const std::size_t dims = ops.front().space().dims();
  std::vector<int> choice(dims, -1);
  for (const auto& op : ops) {
    require(op.kind() == LinearOperator::Kind::Diagonal,
            "generators must be diagonal in a known basis");
    require(op.space() == ops.front().space(), "generators live on different spaces");
    for (std::size_t d = 0; d < dims; ++d) {
      if (!op.support()[d]) continue;
      const int want = op.basis()[d] ? 1 : 0;
      require(choice[d] == -1 || choice[d] == want,
              "generator list is not jointly diagonal (non-commuting generators)");
      choice[d] = want;
    }
  }
  AxisMask m(dims);
  for (std::size_t d = 0; d < dims; ++d) m[d] = choice[d] == 1;
  return m;
}

FiberedOperator fibered_unitary(const CompositeSpace& space, const std::vector<LinearOperator>& xs,
                                const std::vector<LinearOperator>& ys, double kappa) {
  require(xs.size() == ys.size() && !xs.empty(), "generator lists must pair up");
  const AxisMask hb = common_basis(xs);
  std::vector<CVec> xv, yv;
  for (const auto& x : xs) {
    require(x.space() == space.first(), "X generator not on the first factor");
    xv.push_back(x.rebased(hb).diagonal_values());
  }
  AxisMask hsup = no_axes(space.first().dims());
  for (const auto& x : xs)
    for (std::size_t d = 0; d < hsup.size(); ++d) hsup[d] = hsup[d] || x.support()[d];
  for (const auto& y : ys) {
    require(y.space() == space.second(), "Y generator not on the second factor");
    require(y.kind() == LinearOperator::Kind::Diagonal && y.diagonal_in(space.fiber_basis()),
            "Y generators must be diagonal in the declared fiber basis");
    yv.push_back(y.rebased(space.fiber_basis()).diagonal_values());
  }
  const LatticeSpace h = space.first();
  return FiberedOperator(space, [=](std::size_t y) {
    CVec phase = CVec::Zero(h.size());
    for (std::size_t mu = 0; mu < xv.size(); ++mu) phase += yv[mu][y] * xv[mu];
    CVec vals = (cplx(0.0, -kappa) * phase).array().exp().matrix();
    return LinearOperator::diagonal(h, std::move(vals), hb, hsup, false);
  });
}

FiberedOperator conjugate_by(const FiberedOperator& w, const LinearOperator& t) {
  require(t.space() == w.space().first(), "operator does not act on the first factor");
  return FiberedOperator(w.space(), [w, t](std::size_t y) {
    LinearOperator wy = w.fiber(y);
    return (wy.adjoint() * t * wy).tagged_selfadjoint(t.selfadjoint());
  });
}

FiberedOperator lift_first(const CompositeSpace& space, const LinearOperator& t) {
  require(t.space() == space.first(), "operator does not act on the first factor");
  return FiberedOperator(space, [t](std::size_t) { return t; });
}

FiberedOperator lift_second_diagonal(const CompositeSpace& space, const LinearOperator& d) {
  require(d.space() == space.second() && d.diagonal_in(space.fiber_basis()),
          "second-factor operator must be diagonal in the fiber basis");
  CVec vals = d.rebased(space.fiber_basis()).diagonal_values();
  const LatticeSpace h = space.first();
  return FiberedOperator(space, [vals, h](std::size_t y) { return LinearOperator::identity(h, vals[y]); });
}

}  // namespace warplab

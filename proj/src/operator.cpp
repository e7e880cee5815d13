#include "warplab/operator.hpp"

#include <random>
#include <variant>

namespace warplab {

struct DiagonalRep {
  CVec values;
  AxisMask basis;
  AxisMask support;
};
struct DenseRep {
  CMat m;
};
struct ProductRep {
  std::vector<LinearOperator> factors;  // leftmost first
};
struct SumRep {
  std::vector<cplx> coeffs;
  std::vector<LinearOperator> terms;
};
struct FunctionalRep {
  VecMap action;
  std::optional<VecMap> adjoint_action;
};

struct LinearOperator::Node {
  LatticeSpace space;
  bool selfadjoint = false;
  std::variant<DiagonalRep, DenseRep, ProductRep, SumRep, FunctionalRep> rep;
};

namespace {

template <class Rep>
std::shared_ptr<const LinearOperator::Node> make_node(const LatticeSpace& s, bool sa, Rep r) {
  auto n = std::make_shared<LinearOperator::Node>();
  n->space = s;
  n->selfadjoint = sa;
  n->rep = std::move(r);
  return n;
}

bool mask_agrees_on(const AxisMask& a, const AxisMask& b, const AxisMask& support) {
  for (std::size_t d = 0; d < a.size(); ++d)
    if (support[d] && a[d] != b[d]) return false;
  return true;
}

}  // namespace

LinearOperator LinearOperator::diagonal(const LatticeSpace& space, CVec values, AxisMask basis,
                                        AxisMask support, bool selfadjoint) {
  require(static_cast<std::size_t>(values.size()) == space.size(),
          "diagonal values do not match space size");
  require(basis.size() == space.dims() && support.size() == space.dims(),
          "basis/support mask size mismatch");
  return LinearOperator(
      make_node(space, selfadjoint, DiagonalRep{std::move(values), std::move(basis), std::move(support)}));
}

LinearOperator LinearOperator::position_diagonal(const LatticeSpace& space, CVec values) {
  bool real = values.imag().cwiseAbs().maxCoeff() == 0.0;
  return diagonal(space, std::move(values), no_axes(space.dims()), all_axes(space.dims()), real);
}

LinearOperator LinearOperator::position_diagonal(const LatticeSpace& space, const RVec& values) {
  return diagonal(space, values.cast<cplx>(), no_axes(space.dims()), all_axes(space.dims()), true);
}

LinearOperator LinearOperator::momentum_diagonal(const LatticeSpace& space, CVec values) {
  bool real = values.imag().cwiseAbs().maxCoeff() == 0.0;
  return diagonal(space, std::move(values), all_axes(space.dims()), all_axes(space.dims()), real);
}

LinearOperator LinearOperator::momentum_diagonal(const LatticeSpace& space, const RVec& values) {
  return diagonal(space, values.cast<cplx>(), all_axes(space.dims()), all_axes(space.dims()), true);
}

LinearOperator LinearOperator::dense(const LatticeSpace& space, CMat m) {
  require(static_cast<std::size_t>(m.rows()) == space.size() && m.rows() == m.cols(),
          "dense matrix does not match space size");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const bool herm = (m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale;
  return LinearOperator(make_node(space, herm, DenseRep{std::move(m)}));
}

LinearOperator LinearOperator::identity(const LatticeSpace& space, cplx scale) {
  return diagonal(space, CVec::Constant(space.size(), scale), no_axes(space.dims()),
                  no_axes(space.dims()), scale.imag() == 0.0);
}

LinearOperator LinearOperator::functional(const LatticeSpace& space, VecMap action,
                                          std::optional<VecMap> adjoint_action, bool selfadjoint) {
  return LinearOperator(
      make_node(space, selfadjoint, FunctionalRep{std::move(action), std::move(adjoint_action)}));
}

LinearOperator::Kind LinearOperator::kind() const {
  require(node_ != nullptr, "empty operator");
  return static_cast<Kind>(node_->rep.index());
}

const LatticeSpace& LinearOperator::space() const {
  require(node_ != nullptr, "empty operator");
  return node_->space;
}

bool LinearOperator::selfadjoint() const { return node_ && node_->selfadjoint; }

LinearOperator LinearOperator::tagged_selfadjoint(bool flag) const {
  auto n = std::make_shared<Node>(*node_);
  n->selfadjoint = flag;
  return LinearOperator(n);
}

CVec LinearOperator::apply(const CVec& v) const {
  const auto& s = space();
  require(static_cast<std::size_t>(v.size()) == s.size(), "space mismatch in apply");
  return std::visit(
      [&](const auto& r) -> CVec {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, DiagonalRep>) {
          bool any = false;
          for (bool b : r.basis) any = any || b;
          if (!any) return r.values.cwiseProduct(v);
          CVec w = to_basis(s, r.basis, v);
          w = r.values.cwiseProduct(w);
          return from_basis(s, r.basis, w);
        } else if constexpr (std::is_same_v<R, DenseRep>) {
          return r.m * v;
        } else if constexpr (std::is_same_v<R, ProductRep>) {
          CVec w = v;
          for (std::size_t i = r.factors.size(); i-- > 0;) w = r.factors[i].apply(w);
          return w;
        } else if constexpr (std::is_same_v<R, SumRep>) {
          CVec w = CVec::Zero(v.size());
          for (std::size_t i = 0; i < r.terms.size(); ++i) w += r.coeffs[i] * r.terms[i].apply(v);
          return w;
        } else {
          return r.action(v);
        }
      },
      node_->rep);
}

cplx LinearOperator::expectation(const CVec& v) const { return v.dot(apply(v)); }

CMat LinearOperator::to_dense() const {
  if (kind() == Kind::Dense) return dense_matrix();
  const std::size_t n = dim();
  CMat m(n, n);
  if (kind() == Kind::Diagonal) {
    const auto& r = std::get<DiagonalRep>(node_->rep);
    bool any = false;
    for (bool b : r.basis) any = any || b;
    if (!any) {
      m.setZero();
      m.diagonal() = r.values;
      return m;
    }
  }
  CVec e = CVec::Zero(n);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    m.col(j) = apply(e);
    e[j] = 0.0;
  }
  return m;
}

LinearOperator LinearOperator::adjoint() const {
  const auto& s = space();
  if (selfadjoint()) return *this;
  return std::visit(
      [&](const auto& r) -> LinearOperator {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, DiagonalRep>) {
          return diagonal(s, r.values.conjugate(), r.basis, r.support, false);
        } else if constexpr (std::is_same_v<R, DenseRep>) {
          return dense(s, r.m.adjoint());
        } else if constexpr (std::is_same_v<R, ProductRep>) {
          std::vector<LinearOperator> f;
          for (std::size_t i = r.factors.size(); i-- > 0;) f.push_back(r.factors[i].adjoint());
          return LinearOperator(make_node(s, false, ProductRep{f}));
        } else if constexpr (std::is_same_v<R, SumRep>) {
          SumRep out;
          for (std::size_t i = 0; i < r.terms.size(); ++i) {
            out.coeffs.push_back(std::conj(r.coeffs[i]));
            out.terms.push_back(r.terms[i].adjoint());
          }
          return LinearOperator(make_node(s, false, out));
        } else {
          require(r.adjoint_action.has_value(), "functional operator has no adjoint action");
          return functional(s, *r.adjoint_action, r.action, false);
        }
      },
      node_->rep);
}

const CVec& LinearOperator::diagonal_values() const {
  require(kind() == Kind::Diagonal, "operator is not diagonal");
  return std::get<DiagonalRep>(node_->rep).values;
}
const AxisMask& LinearOperator::basis() const {
  require(kind() == Kind::Diagonal, "operator is not diagonal");
  return std::get<DiagonalRep>(node_->rep).basis;
}
const AxisMask& LinearOperator::support() const {
  require(kind() == Kind::Diagonal, "operator is not diagonal");
  return std::get<DiagonalRep>(node_->rep).support;
}
const CMat& LinearOperator::dense_matrix() const {
  require(kind() == Kind::Dense, "operator is not dense");
  return std::get<DenseRep>(node_->rep).m;
}

bool LinearOperator::diagonal_in(const AxisMask& b) const {
  if (kind() != Kind::Diagonal) return false;
  const auto& r = std::get<DiagonalRep>(node_->rep);
  return mask_agrees_on(r.basis, b, r.support);
}

LinearOperator LinearOperator::rebased(const AxisMask& b) const {
  require(diagonal_in(b), "diagonal cannot be expressed in the requested basis");
  const auto& r = std::get<DiagonalRep>(node_->rep);
  if (r.basis == b) return *this;
  // Values depend only on support axes, whose basis is unchanged, so the
  // same array is valid: each flat index keeps its support coordinates.
  return diagonal(space(), r.values, b, r.support, selfadjoint());
}

LinearOperator LinearOperator::operator*(const LinearOperator& rhs) const {
  require(space() == rhs.space(), "space mismatch in product");
  if (kind() == Kind::Diagonal && rhs.kind() == Kind::Diagonal) {
    const auto& a = std::get<DiagonalRep>(node_->rep);
    if (rhs.diagonal_in(a.basis)) {
      const auto& b = std::get<DiagonalRep>(rhs.node_->rep);
      AxisMask sup(a.support.size());
      for (std::size_t d = 0; d < sup.size(); ++d) sup[d] = a.support[d] || b.support[d];
      const bool sa = selfadjoint() && rhs.selfadjoint();
      return diagonal(space(), a.values.cwiseProduct(b.values), a.basis, sup, sa);
    }
    if (diagonal_in(rhs.basis())) return rebased(rhs.basis()) * rhs;
  }
  if (kind() == Kind::Dense && rhs.kind() == Kind::Dense)
    return dense(space(), dense_matrix() * rhs.dense_matrix());
  std::vector<LinearOperator> f;
  auto push = [&](const LinearOperator& o) {
    if (o.kind() == Kind::Product) {
      for (const auto& g : std::get<ProductRep>(o.node_->rep).factors) f.push_back(g);
    } else {
      f.push_back(o);
    }
  };
  push(*this);
  push(rhs);
  return LinearOperator(make_node(space(), false, ProductRep{f}));
}

LinearOperator LinearOperator::operator+(const LinearOperator& rhs) const {
  return linear_combination({1.0, 1.0}, {*this, rhs});
}

LinearOperator LinearOperator::operator-(const LinearOperator& rhs) const {
  return linear_combination({1.0, -1.0}, {*this, rhs});
}

LinearOperator LinearOperator::scaled(cplx c) const { return linear_combination({c}, {*this}); }

LinearOperator operator*(cplx c, const LinearOperator& op) { return op.scaled(c); }

LinearOperator linear_combination(const std::vector<cplx>& coeffs,
                                  const std::vector<LinearOperator>& ops) {
  require(!ops.empty() && coeffs.size() == ops.size(), "linear combination needs matched terms");
  const LatticeSpace& s = ops.front().space();
  bool all_real = true;
  bool all_sa = true;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    require(ops[i].space() == s, "space mismatch in sum");
    all_real = all_real && coeffs[i].imag() == 0.0;
    all_sa = all_sa && ops[i].selfadjoint();
  }
  const bool sa = all_real && all_sa;

  // Collapse: diagonals that can share the first diagonal's basis, and dense terms.
  std::vector<cplx> rest_c;
  std::vector<LinearOperator> rest;
  std::optional<LinearOperator> diag;
  std::optional<CMat> dense;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const auto& o = ops[i];
    if (o.kind() == LinearOperator::Kind::Diagonal) {
      if (!diag) {
        diag = LinearOperator::diagonal(s, coeffs[i] * o.diagonal_values(), o.basis(), o.support(),
                                        false);
        continue;
      }
      AxisMask b = diag->basis();
      if (!o.diagonal_in(b) && diag->diagonal_in(o.basis())) b = o.basis();
      if (o.diagonal_in(b) && diag->diagonal_in(b)) {
        const auto& d = diag->rebased(b);
        AxisMask sup(b.size());
        for (std::size_t k = 0; k < b.size(); ++k) sup[k] = d.support()[k] || o.support()[k];
        diag = LinearOperator::diagonal(
            s, d.diagonal_values() + coeffs[i] * o.rebased(b).diagonal_values(), b, sup, false);
        continue;
      }
    }
    if (o.kind() == LinearOperator::Kind::Dense) {
      if (!dense) dense = CMat::Zero(s.size(), s.size());
      *dense += coeffs[i] * o.dense_matrix();
      continue;
    }
    rest_c.push_back(coeffs[i]);
    rest.push_back(o);
  }
  if (diag && dense) {
    *dense += diag->to_dense();
    diag.reset();
  }
  if (diag) {
    rest_c.insert(rest_c.begin(), 1.0);
    rest.insert(rest.begin(), diag->tagged_selfadjoint(sa));
  }
  if (dense) {
    rest_c.insert(rest_c.begin(), 1.0);
    rest.insert(rest.begin(), LinearOperator::dense(s, *dense));
  }
  if (rest.size() == 1 && rest_c[0] == cplx(1.0)) return rest[0].tagged_selfadjoint(sa);
  SumRep r{rest_c, rest};
  auto n = std::make_shared<LinearOperator::Node>();
  n->space = s;
  n->selfadjoint = sa;
  n->rep = std::move(r);
  return LinearOperator::functional(s, [n](const CVec& v) {
    const auto& sr = std::get<SumRep>(n->rep);
    CVec w = CVec::Zero(v.size());
    for (std::size_t i = 0; i < sr.terms.size(); ++i) w += sr.coeffs[i] * sr.terms[i].apply(v);
    return w;
  }, [n](const CVec& v) {
    const auto& sr = std::get<SumRep>(n->rep);
    CVec w = CVec::Zero(v.size());
    for (std::size_t i = 0; i < sr.terms.size(); ++i)
      w += std::conj(sr.coeffs[i]) * sr.terms[i].adjoint().apply(v);
    return w;
  }, sa);
}

LinearOperator position_operator(const LatticeSpace& space, std::size_t axis) {
  require(axis < space.dims(), "axis out of range");
  AxisMask sup = no_axes(space.dims());
  sup[axis] = true;
  return LinearOperator::diagonal(space, space.position_grid(axis).cast<cplx>(),
                                  no_axes(space.dims()), sup, true);
}

LinearOperator momentum_operator(const LatticeSpace& space, std::size_t axis) {
  require(axis < space.dims(), "axis out of range");
  AxisMask sup = no_axes(space.dims());
  sup[axis] = true;
  AxisMask basis = no_axes(space.dims());
  basis[axis] = true;
  return LinearOperator::diagonal(space, space.momentum_grid(axis).cast<cplx>(), basis, sup, true);
}

LinearOperator exp_diagonal(const LinearOperator& a, cplx c) {
  require(a.kind() == LinearOperator::Kind::Diagonal, "exp_diagonal needs a diagonal operator");
  CVec v = (c * a.diagonal_values()).array().exp().matrix();
  const bool unitary = a.selfadjoint() && c.real() == 0.0;
  (void)unitary;
  return LinearOperator::diagonal(a.space(), std::move(v), a.basis(), a.support(), false);
}

LinearOperator map_diagonal(const LinearOperator& a, const std::function<cplx(cplx)>& f) {
  require(a.kind() == LinearOperator::Kind::Diagonal, "map_diagonal needs a diagonal operator");
  CVec v = a.diagonal_values().unaryExpr(f);
  const bool real = v.imag().cwiseAbs().maxCoeff() == 0.0;
  return LinearOperator::diagonal(a.space(), std::move(v), a.basis(), a.support(), real);
}

CVec commutator_apply(const LinearOperator& a, const LinearOperator& b, const CVec& v) {
  return a.apply(b.apply(v)) - b.apply(a.apply(v));
}

double hermiticity_defect(const LinearOperator& a, unsigned seed, int trials) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    CVec p(a.dim()), q(a.dim());
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      p[i] = cplx(nd(rng), nd(rng));
      q[i] = cplx(nd(rng), nd(rng));
    }
    p.normalize();
    q.normalize();
    worst = std::max(worst, std::abs(p.dot(a.apply(q)) - std::conj(q.dot(a.apply(p)))));
  }
  return worst;
}

}  // namespace warplab

#include "warplab/deform.hpp"

#include <cmath>
#include <random>

#include "warplab/dense.hpp"
#include "warplab/state.hpp"

namespace warplab {

DeformationMatrix::DeformationMatrix(const RMat& m) {
  require(m.rows() == m.cols(), "deformation matrix must be square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  require((m + m.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale,
          "deformation matrix must be skew-symmetric");
  m_ = 0.5 * (m - m.transpose());
  skew_ = true;
}

DeformationMatrix DeformationMatrix::general(const RMat& m) {
  require(m.rows() == m.cols(), "deformation matrix must be square");
  DeformationMatrix d;
  d.m_ = m;
  d.skew_ = (m + m.transpose()).cwiseAbs().maxCoeff() == 0.0;
  return d;
}

DeformationMatrix DeformationMatrix::zero(std::size_t n) { return DeformationMatrix(RMat::Zero(n, n)); }

DeformationMatrix DeformationMatrix::symplectic(std::size_t n, double theta) {
  require(n % 2 == 0, "symplectic form needs an even number of coordinates");
  RMat m = RMat::Zero(n, n);
  const std::size_t k = n / 2;
  for (std::size_t i = 0; i < k; ++i) {
    m(i, i + k) = theta;
    m(i + k, i) = -theta;
  }
  return DeformationMatrix(m);
}

DeformationMatrix DeformationMatrix::scaled(double t) const {
  DeformationMatrix d = *this;
  d.m_ *= t;
  return d;
}

ActionSpec::ActionSpec(std::vector<LinearOperator> generators) : gens_(std::move(generators)) {
  basis_ = common_basis(gens_);
  const std::size_t n = space().size();
  spec_.resize(n, gens_.size());
  for (std::size_t mu = 0; mu < gens_.size(); ++mu) {
    const CVec v = gens_[mu].rebased(basis_).diagonal_values();
    require(v.imag().cwiseAbs().maxCoeff() <= 1e-12, "generators must be selfadjoint");
    spec_.col(mu) = v.real();
  }
}

LinearOperator ActionSpec::act(const RVec& x, const LinearOperator& t) const {
  require(static_cast<std::size_t>(x.size()) == gens_.size(), "action parameter has wrong length");
  std::vector<LinearOperator> rebased;
  for (const auto& g : gens_) rebased.push_back(g.rebased(basis_));
  std::vector<cplx> c(x.data(), x.data() + x.size());
  const LinearOperator u = exp_diagonal(linear_combination(c, rebased), kI);
  return (u * t * u.adjoint()).tagged_selfadjoint(t.selfadjoint());
}

CMat ActionSpec::to_generator_basis(const CMat& m) const {
  const auto& s = space();
  CMat bm(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) bm.col(j) = to_basis(s, basis_, m.col(j));
  CMat t = bm.adjoint();
  for (Eigen::Index j = 0; j < t.cols(); ++j) t.col(j) = to_basis(s, basis_, CVec(t.col(j)));
  return t.adjoint();
}

CMat ActionSpec::from_generator_basis(const CMat& m) const {
  const auto& s = space();
  CMat bm(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) bm.col(j) = from_basis(s, basis_, m.col(j));
  CMat t = bm.adjoint();
  for (Eigen::Index j = 0; j < t.cols(); ++j) t.col(j) = from_basis(s, basis_, CVec(t.col(j)));
  return t.adjoint();
}

namespace {
constexpr std::size_t kDeformCap = 1024;

// S_ab = g_a^T Theta g_b over joint spectral points.
RMat pairing(const ActionSpec& action, const DeformationMatrix& theta) {
  require(theta.size() == action.size(), "deformation size differs from the generator count");
  const RMat& g = action.spectrum();
  return g * theta.matrix() * g.transpose();
}

CMat phases(const RMat& s, double sign) {
  return s.unaryExpr([sign](double v) { return std::polar(1.0, sign * v); });
}
}  // namespace

LinearOperator warped_convolution(const LinearOperator& t, const ActionSpec& action,
                                  const DeformationMatrix& theta) {
  require(t.space() == action.space(), "operator and action live on different spaces");
  require(t.dim() <= kDeformCap, "warped convolution is dense; dimension above 1024");
  const RMat s = pairing(action, theta);
  const CMat tb = action.to_generator_basis(t.to_dense());
  const CVec d = s.diagonal().unaryExpr([](double v) { return std::polar(1.0, -v); });
  const CMat out = tb.cwiseProduct(phases(s, 1.0)) * d.asDiagonal();
  return LinearOperator::dense(t.space(), action.from_generator_basis(out));
}

LinearOperator rieffel_product(const LinearOperator& a, const LinearOperator& b,
                               const ActionSpec& action, const DeformationMatrix& theta) {
  require(a.space() == action.space() && b.space() == action.space(),
          "operators and action live on different spaces");
  require(a.dim() <= kDeformCap, "deformed product is dense; dimension above 1024");
  const RMat s = pairing(action, theta);
  const CMat ep = phases(s, 1.0);
  const CVec d = s.diagonal().unaryExpr([](double v) { return std::polar(1.0, -v); });
  const CMat ab = action.to_generator_basis(a.to_dense()).cwiseProduct(ep);
  const CMat bb = action.to_generator_basis(b.to_dense()).cwiseProduct(ep);
  const CMat c = (ab * d.asDiagonal() * bb).cwiseProduct(phases(s, -1.0));
  return LinearOperator::dense(a.space(), action.from_generator_basis(c));
}

double product_compatibility_check(const LinearOperator& a, const LinearOperator& b,
                                   const ActionSpec& action, const DeformationMatrix& theta,
                                   unsigned seed, int probes) {
  const LinearOperator at = warped_convolution(a, action, theta);
  const LinearOperator bt = warped_convolution(b, action, theta);
  const LinearOperator ct = warped_convolution(rieffel_product(a, b, action, theta), action, theta);
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < probes; ++i) {
    const CVec v = random_unit_vector(a.dim(), rng);
    worst = std::max(worst, (at.apply(bt.apply(v)) - ct.apply(v)).norm());
  }
  return worst;
}

TheoremReport theorem1_check(const LinearOperator& t, const CompositeSpace& space,
                             const std::vector<LinearOperator>& xs,
                             const std::vector<LinearOperator>& ys, double kappa, unsigned seed,
                             int probes) {
  require(space.size() <= kDenseCap, "brute-force composite evolution above the dense cap");
  require(t.space() == space.first(), "operator does not act on the first factor");
  const FiberedOperator fib = conjugate_by(fibered_unitary(space, xs, ys, kappa), t);
  const std::size_t dk = space.second().size();
  const CMat td = t.to_dense();
  TheoremReport rep;
  rep.dimension = space.size();
  rep.probes = probes;
  std::vector<std::pair<CMat, CMat>> terms;
  for (std::size_t mu = 0; mu < xs.size(); ++mu) terms.emplace_back(kappa * xs[mu].to_dense(), ys[mu].to_dense());
  std::function<CVec(const CVec&)> brute;
  if (space.size() <= 1024) {
    CMat g = CMat::Zero(space.size(), space.size());
    for (const auto& [a, b] : terms) g += kron(a, b);
    const CMat u = dense_oracle_exponential(g, 1.0);
    brute = [u, td, dk](const CVec& v) { return CVec(u.adjoint() * apply_first(td, u * v, dk)); };
    rep.dense_path = "dense-exponential";
  } else {
    auto ke = std::make_shared<KronExponential>(terms, 1.0);
    brute = [ke, td, dk](const CVec& v) { return ke->apply_adjoint(apply_first(td, ke->apply(v), dk)); };
    rep.dense_path = "kron-exponential";
  }
  std::mt19937_64 rng(seed);
  for (int i = 0; i < probes; ++i) {
    const CVec v = random_unit_vector(space.size(), rng);
    rep.residual = std::max(rep.residual, (fib.apply(v) - brute(v)).norm());
  }
  return rep;
}

}  // namespace warplab

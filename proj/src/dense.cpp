#include "warplab/dense.hpp"

#include <cmath>

namespace warplab {

CMat dense_oracle_exponential(const CMat& g, double t) {
  require(g.rows() == g.cols(), "generator must be square");
  require(static_cast<std::size_t>(g.rows()) <= kDenseCap, "dense oracle dimension above 4096");
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  require((g - g.adjoint()).cwiseAbs().maxCoeff() <= 1e-10 * scale, "generator is not selfadjoint");
  Eigen::SelfAdjointEigenSolver<CMat> es(g);
  CVec ph = (cplx(0.0, -t) * es.eigenvalues().cast<cplx>()).array().exp().matrix();
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

CMat dft_matrix(const LatticeSpace& space) {
  CMat f = CMat::Ones(1, 1);
  for (std::size_t d = 0; d < space.dims(); ++d) {
    const int n = space.points(d);
    CMat fd(n, n);
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        fd(k, j) = std::polar(1.0 / std::sqrt(double(n)), -2.0 * kPi * double(k) * j / n);
    f = kron(f, fd);
  }
  return f;
}

CMat dense_position(const LatticeSpace& space, std::size_t axis) {
  CMat m = CMat::Zero(space.size(), space.size());
  m.diagonal() = space.position_grid(axis).cast<cplx>();
  return m;
}

CMat dense_momentum(const LatticeSpace& space, std::size_t axis) {
  CMat f = dft_matrix(space);
  CVec k = space.momentum_grid(axis).cast<cplx>();
  return f.adjoint() * k.asDiagonal() * f;
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

KronExponential::KronExponential(const std::vector<std::pair<CMat, CMat>>& terms, double t) {
  require(!terms.empty(), "empty term list");
  dh_ = terms.front().first.rows();
  dk_ = terms.front().second.rows();
  for (const auto& [a, b] : terms) {
    require(static_cast<std::size_t>(a.rows()) == dh_ && static_cast<std::size_t>(b.rows()) == dk_,
            "kron term dimensions differ");
    Eigen::SelfAdjointEigenSolver<CMat> ea(a), eb(b);
    Factor f;
    f.u = ea.eigenvectors();
    f.v = eb.eigenvectors();
    f.phase.resize(dh_, dk_);
    for (std::size_t i = 0; i < dh_; ++i)
      for (std::size_t j = 0; j < dk_; ++j)
        f.phase(i, j) = std::polar(1.0, -t * ea.eigenvalues()[i] * eb.eigenvalues()[j]);
    factors_.push_back(std::move(f));
  }
}

namespace {
// Row-major composite vector <-> dh x dk matrix M with M(h,k) = v[h*dk+k].
CMat as_matrix(const CVec& v, std::size_t dh, std::size_t dk) {
  CMat m(dh, dk);
  for (std::size_t h = 0; h < dh; ++h)
    for (std::size_t k = 0; k < dk; ++k) m(h, k) = v[h * dk + k];
  return m;
}
CVec as_vector(const CMat& m) {
  CVec v(m.size());
  for (Eigen::Index h = 0; h < m.rows(); ++h)
    for (Eigen::Index k = 0; k < m.cols(); ++k) v[h * m.cols() + k] = m(h, k);
  return v;
}
}  // namespace

CVec KronExponential::apply(const CVec& v) const {
  CMat m = as_matrix(v, dh_, dk_);
  for (const auto& f : factors_) {
    // (U (x) V) diag (U (x) V)^dagger with (A (x) B) vec(M) = vec(A M B^T).
    CMat c = f.u.adjoint() * m * f.v.conjugate();
    c = c.cwiseProduct(f.phase);
    m = f.u * c * f.v.transpose();
  }
  return as_vector(m);
}

CVec KronExponential::apply_adjoint(const CVec& v) const {
  CMat m = as_matrix(v, dh_, dk_);
  for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) {
    CMat c = it->u.adjoint() * m * it->v.conjugate();
    c = c.cwiseProduct(it->phase.conjugate());
    m = it->u * c * it->v.transpose();
  }
  return as_vector(m);
}

CVec apply_first(const CMat& a, const CVec& v, std::size_t dk) {
  const std::size_t dh = a.rows();
  return as_vector(a * as_matrix(v, dh, dk));
}

CVec apply_second(const CMat& b, const CVec& v, std::size_t dh) {
  const std::size_t dk = b.rows();
  return as_vector(as_matrix(v, dh, dk) * b.transpose());
}

double unitarity_defect(const CMat& u) {
  return (u.adjoint() * u - CMat::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

}  // namespace warplab

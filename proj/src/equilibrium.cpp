#include "warplab/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "warplab/dense.hpp"

namespace warplab {

GnsModel build_gns(const CMat& h, double beta) {
  const auto d = static_cast<int>(h.rows());
  require(d >= 1 && d <= 64 && h.cols() == d, "Hamiltonian must be square with dimension at most 64");
  require((h - h.adjoint()).cwiseAbs().maxCoeff() <= 1e-12, "Hamiltonian is not Hermitian");
  require(beta > 0.0, "inverse temperature must be positive");
  GnsModel g;
  g.space = LatticeSpace::index_space(d * d);
  g.beta = beta;
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  g.energies = es.eigenvalues();
  g.eigenvectors = es.eigenvectors();
  const CMat id = CMat::Identity(d, d);
  g.liouvillian =
      LinearOperator::dense(g.space, kron(h, id) - kron(id, CMat(h.conjugate()))).tagged_selfadjoint(true);
  // Shift by the ground energy so large beta does not underflow.
  const double e0 = g.energies.minCoeff();
  g.omega = CVec::Zero(d * d);
  double z = 0.0;
  for (int i = 0; i < d; ++i) {
    const double w = std::exp(-0.5 * beta * (g.energies[i] - e0));
    const CVec v = g.eigenvectors.col(i);
    g.omega += w * kron(v, CVec(v.conjugate()));
    z += w * w;
  }
  g.omega /= std::sqrt(z);
  return g;
}

cplx GnsModel::expectation(const CMat& a) const {
  const auto d = static_cast<std::size_t>(energies.size());
  return omega.dot(apply_first(a, omega, d));
}

double GnsModel::omega_residual() const { return liouvillian.apply(omega).norm(); }

RVec GnsModel::liouvillian_spectrum() const {
  const auto d = energies.size();
  RVec out(d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) out[i * d + j] = energies[i] - energies[j];
  std::sort(out.begin(), out.end());
  return out;
}

TimeOperator::TimeOperator(LatticeSpace line, std::size_t zero_mode) : line_(std::move(line)), zero_(zero_mode) {
  require(line_.dims() == 1, "time operator lives on a 1D line");
  require(zero_ < line_.size(), "zero mode outside the line");
  const auto n = static_cast<Eigen::Index>(line_.size());
  const CMat t = -momentum_operator(line_, 0).to_dense();
  CMat q = CMat::Identity(n, n);
  q(zero_, zero_) = 0.0;
  m_ = q * t * q;
  m_ = 0.5 * (m_ + m_.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(m_);
  evals_ = es.eigenvalues();
  evecs_ = es.eigenvectors();
}

LinearOperator TimeOperator::op() const { return LinearOperator::dense(line_, m_).tagged_selfadjoint(true); }

CMat TimeOperator::exp_i(double s) const {
  const CVec ph = (cplx(0.0, s) * evals_.cast<cplx>()).array().exp();
  return evecs_ * ph.asDiagonal() * evecs_.adjoint();
}

double TimeOperator::commutation_residual(const CVec& psi) const {
  const RVec lam = line_.position_grid(0);
  const CVec lpsi = lam.cast<cplx>().cwiseProduct(psi);
  const CVec comm = m_ * lpsi - lam.cast<cplx>().cwiseProduct(m_ * psi);
  return (comm / kI - psi).norm();
}

SpectralLine build_spectral_line(int n, double window) {
  require(n >= 4 && n % 2 == 0, "line needs an even number of points");
  require(window > 0.0, "energy window must be positive");
  SpectralLine s;
  s.line = make_lattice(1, {n}, {window});
  s.zero_mode = static_cast<std::size_t>(n / 2);
  s.liouvillian = position_operator(s.line, 0);
  s.omega = CVec::Zero(n);
  s.omega[s.zero_mode] = 1.0;
  s.time = TimeOperator(s.line, s.zero_mode);
  return s;
}

double SpectralLine::omega_residual() const { return liouvillian.apply(omega).norm(); }

std::vector<CVec> line_corpus(const LatticeSpace& line, double center, double width, unsigned seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  std::vector<CVec> out;
  for (int i = 0; i < count; ++i)
    out.push_back(gaussian_state(line, {center + 0.25 * ud(rng)}, {width * (1.0 + 0.1 * ud(rng))},
                                 {0.2 * ud(rng)})
                      .unit_vector());
  return out;
}

double covariance_residual(const SpectralLine& model, double s, const std::vector<CVec>& probes) {
  const double a = model.line.spacing(0);
  const long k = std::lround(s / a);
  require(std::abs(s / a - k) <= 1e-9, "shift must be a whole number of lattice spacings");
  const auto n = static_cast<long>(model.line.size());
  const CMat u = model.time.exp_i(-s);
  double worst = 0.0;
  for (const auto& psi : probes) {
    const RVec before = psi.cwiseAbs2();
    const RVec after = (u * psi).cwiseAbs2();
    for (long m = 0; m < n; ++m) {
      const long src = m + k;
      const double ref = src >= 0 && src < n ? before[src] : 0.0;
      worst = std::max(worst, std::abs(after[m] - ref));
    }
  }
  return worst;
}

double potential_identification(double e, const RVec& field, const DensityState& phi) {
  const LatticeSpace& k = phi.space();
  require(k.dims() == static_cast<std::size_t>(field.size()) + 1,
          "pointer needs one time-like axis plus one axis per field component");
  double v = 0.0;
  for (Eigen::Index c = 0; c < field.size(); ++c) {
    const auto axis = static_cast<std::size_t>(c + 1);
    const RVec x = k.position_grid(axis);
    const double edge = 3.0 * k.length(axis) / 8.0;
    RVec outer = (x.array().abs() >= edge).cast<double>();
    const double mass = phi.expectation(LinearOperator::position_diagonal(k, outer)).real();
    if (mass > 1e-8)
      throw PreconditionError("pointer state has mass " + format_number(mass) + " near the edge of axis " +
                              std::to_string(axis));
    v += field[c] * phi.expectation(position_operator(k, axis)).real();
  }
  return e * v;
}

namespace {
// Dense matrix acting on axis 0 of a 2D row-major lattice.
LinearOperator along_first_axis(const LatticeSpace& space, const CMat& m) {
  const auto n0 = static_cast<Eigen::Index>(space.points(0));
  const auto n1 = static_cast<Eigen::Index>(space.points(1));
  auto act = [n0, n1](const CMat& a) {
    return [a, n0, n1](const CVec& v) {
      // Column-major n1 x n0 view of the row-major n0 x n1 layout.
      Eigen::Map<const CMat> in(v.data(), n1, n0);
      CMat r = in * a.transpose();
      return CVec(Eigen::Map<const CVec>(r.data(), r.size()));
    };
  };
  return LinearOperator::functional(space, act(m), act(m.adjoint()), false);
}
}  // namespace

PotentialSetup potential_setup(const SpectralLine& model, int spatial_points, double spatial_length,
                               const LatticeSpace& pointer, double e, double field) {
  require(pointer.dims() == 2, "desk-scale pointer has one time-like and one spatial axis");
  PotentialSetup s;
  s.model = model;
  s.system = make_lattice(2, {static_cast<int>(model.line.size()), spatial_points},
                          {model.line.length(0), spatial_length});
  s.pointer = pointer;
  AxisMask fb = no_axes(2);
  fb[0] = true;  // T_K = -P is diagonal in momentum
  s.space = CompositeSpace(s.system, pointer, fb);
  s.e = e;
  s.field = field;
  return s;
}

FiberedOperator potential_coupling(const PotentialSetup& s) {
  const RVec t_k = -s.pointer.momentum_grid(0);
  const RVec x_k = s.pointer.position_grid(1);
  const RVec x_h = s.system.position_grid(1);
  const double c = s.e * s.field;
  const LatticeSpace h = s.system;
  // The time-axis factor depends only on the spatial index of the fiber.
  const std::size_t n1 = s.pointer.points(1);
  auto shifts = std::make_shared<std::vector<LinearOperator>>();
  for (std::size_t j = 0; j < n1; ++j) shifts->push_back(along_first_axis(h, s.model.time.exp_i(c * x_k[j])));
  // Fiber (t, x): exp(-i c t X) exp(i c x T).
  return FiberedOperator(s.space, [=](std::size_t y) {
    const LinearOperator boost =
        LinearOperator::position_diagonal(h, CVec((cplx(0.0, -c * t_k[y]) * x_h.cast<cplx>()).array().exp()));
    return boost * (*shifts)[y % n1];
  });
}

std::vector<CVec> system_corpus(const PotentialSetup& s, double center, double width, unsigned seed, int count) {
  const auto lines = line_corpus(s.model.line, center, width, seed, count);
  const LatticeSpace x = make_lattice(1, {s.system.points(1)}, {s.system.length(1)});
  const auto spatial = smooth_corpus(x, seed + 7, count, x.length(0) / 20.0, x.length(0) / 32.0, 0.5);
  std::vector<CVec> out;
  for (int i = 0; i < count; ++i) {
    CVec v(s.system.size());
    for (std::size_t a = 0; a < s.model.line.size(); ++a)
      for (std::size_t b = 0; b < x.size(); ++b) v[a * x.size() + b] = lines[i][a] * spatial[i][b];
    out.push_back(v);
  }
  return out;
}

PotentialReport potential_deformation(const PotentialSetup& s, const DensityState& phi, bool oracle,
                                      const std::vector<CVec>& corpus, unsigned seed) {
  require(phi.space() == s.pointer, "pointer state lives on a different space");
  PotentialReport rep;
  rep.dimension = s.space.size();
  rep.potential = potential_identification(s.e, RVec::Constant(1, s.field), phi);

  const LinearOperator l = position_operator(s.system, 0);
  const LinearOperator p = momentum_operator(s.system, 1);
  const FiberedOperator w = potential_coupling(s);
  const FiberedOperator conj_l = conjugate_by(w, l);
  const FiberedOperator conj_p = conjugate_by(w, p);

  const RVec weights = fiber_weights(s.space, phi);
  const LinearOperator reduced = reduce_fibered(conj_l, weights);
  const LinearOperator target = l + LinearOperator::identity(s.system, rep.potential);
  for (const auto& v : corpus)
    rep.liouvillian_residual = std::max(rep.liouvillian_residual, (reduced.apply(v) - target.apply(v)).norm());

  // Fiber (t, x) of P (x) 1 - eE (1 (x) T_K) is P - eE t.
  const RVec t_k = -s.pointer.momentum_grid(0);
  const double c = s.e * s.field;
  const FiberedOperator shifted(s.space, [=](std::size_t y) {
    return p - LinearOperator::identity(s.system, c * t_k[y]);
  });
  std::vector<std::pair<CVec, CVec>> pairs;
  for (const auto& comp : phi.components())
    for (const auto& v : corpus) pairs.emplace_back(v, comp.second);
  for (double r : product_residuals(conj_p, shifted, pairs)) rep.momentum_residual = std::max(rep.momentum_residual, r);

  // Omega row and column of the difference.
  const LinearOperator diff = reduced - l;
  std::mt19937_64 rng(seed);
  const std::size_t nx = s.system.points(1);
  for (int i = 0; i < 3; ++i) {
    const CVec chi = random_unit_vector(nx, rng);
    CVec v = CVec::Zero(s.system.size());
    for (std::size_t b = 0; b < nx; ++b) v[s.model.zero_mode * nx + b] = chi[b];
    rep.omega_block = std::max({rep.omega_block, diff.apply(v).norm(), diff.adjoint().apply(v).norm()});
  }

  if (oracle) {
    require(s.space.size() <= 4096, "brute-force coupling above the dense cap");
    const std::size_t dk = s.pointer.size();
    const CMat id1 = CMat::Identity(static_cast<Eigen::Index>(nx), static_cast<Eigen::Index>(nx));
    const CMat t_h = kron(s.model.time.matrix(), id1);
    const CMat x_h = position_operator(s.system, 1).to_dense();
    const CMat t_kd = -momentum_operator(s.pointer, 0).to_dense();
    const CMat x_kd = position_operator(s.pointer, 1).to_dense();
    // W = exp(-i G) with G = c (X (x) T_K - T (x) X_K).
    KronExponential ke({{c * x_h, t_kd}, {-c * t_h, x_kd}}, 1.0);
    const CMat ld = l.to_dense(), pd = p.to_dense();
    for (int i = 0; i < 4; ++i) {
      const CVec v = random_unit_vector(s.space.size(), rng);
      const CVec wv = ke.apply(v);
      const CVec bl = ke.apply_adjoint(apply_first(ld, wv, dk));
      const CVec bp = ke.apply_adjoint(apply_first(pd, wv, dk));
      rep.oracle_residual = std::max({rep.oracle_residual, (conj_l.apply(v) - bl).norm(), (conj_p.apply(v) - bp).norm()});
    }
  }
  return rep;
}

}  // namespace warplab

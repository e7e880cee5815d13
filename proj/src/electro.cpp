#include "warplab/electro.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "warplab/state.hpp"

namespace warplab {

void FieldConfig::validate() const { require(m > 0.0, "mass must be positive"); }

DeformationMatrix theta_from_B(const Vec3& b) {
  RMat t = RMat::Zero(3, 3);
  t(0, 1) = b[2];
  t(1, 0) = -b[2];
  t(1, 2) = b[0];
  t(2, 1) = -b[0];
  t(2, 0) = b[1];
  t(0, 2) = -b[1];
  return DeformationMatrix(t);
}

DeformationMatrix force_matrix(const Vec3& b, const Vec3& e) {
  RMat f = RMat::Zero(4, 4);
  for (int i = 0; i < 3; ++i) {
    f(0, i + 1) = -e[i];
    f(i + 1, 0) = e[i];
  }
  f.block(1, 1, 3, 3) = theta_from_B(b).matrix();
  return DeformationMatrix(f);
}

namespace {
std::size_t spatial_dims(const LatticeSpace& s, const Vec3& b) {
  require(s.dims() == 2 || s.dims() == 3, "magnetic coupling needs a 2D or 3D space");
  if (s.dims() == 2)
    require(b[0] == 0.0 && b[1] == 0.0, "2D reduction needs B normal to the plane");
  return s.dims();
}

// Theta restricted to the first n axes.
RMat theta_block(const Vec3& b, std::size_t n) { return theta_from_B(b).matrix().topLeftCorner(n, n); }
}  // namespace

std::vector<LinearOperator> vector_potential(const Vec3& b, const LatticeSpace& space) {
  const std::size_t n = spatial_dims(space, b);
  std::vector<RVec> x;
  for (std::size_t d = 0; d < n; ++d) x.push_back(space.position_grid(d));
  while (x.size() < 3) x.push_back(RVec::Zero(space.size()));
  const RVec a0 = b[1] * x[2] - b[2] * x[1];
  const RVec a1 = b[2] * x[0] - b[0] * x[2];
  const RVec a2 = b[0] * x[1] - b[1] * x[0];
  std::vector<LinearOperator> out{LinearOperator::position_diagonal(space, a0),
                                  LinearOperator::position_diagonal(space, a1)};
  if (n == 3) out.push_back(LinearOperator::position_diagonal(space, a2));
  return out;
}

namespace {
std::pair<std::vector<LinearOperator>, std::vector<LinearOperator>> coupling_generators(
    const CompositeSpace& space, const Vec3& b) {
  const std::size_t n = spatial_dims(space.first(), b);
  require(space.second().dims() == n, "K must have the same dimension as H");
  require(space.fiber_basis() == no_axes(n), "magnetic coupling uses position fibers on K");
  const RMat th = theta_block(b, n);
  std::vector<LinearOperator> xs, ys, kx;
  for (std::size_t d = 0; d < n; ++d) {
    xs.push_back(position_operator(space.first(), d));
    kx.push_back(position_operator(space.second(), d));
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<cplx> c(n);
    for (std::size_t k = 0; k < n; ++k) c[k] = th(j, k);
    ys.push_back(linear_combination(c, kx));
  }
  return {xs, ys};
}
}  // namespace

FiberedOperator minimal_coupling_unitary(const CompositeSpace& space, const Vec3& b, double q) {
  auto [xs, ys] = coupling_generators(space, b);
  return fibered_unitary(space, xs, ys, q);
}

FiberedOperator minimal_substitution(const CompositeSpace& space, const Vec3& b, double q,
                                     std::size_t axis) {
  const std::size_t n = spatial_dims(space.first(), b);
  require(axis < n, "axis out of range");
  require(space.fiber_basis() == no_axes(n), "substitution uses position fibers on K");
  const LatticeSpace k = space.second();
  const LinearOperator p = momentum_operator(space.first(), axis);
  const LinearOperator id = LinearOperator::identity(space.first());
  std::vector<RVec> y;
  for (std::size_t d = 0; d < n; ++d) y.push_back(k.position_grid(d));
  return FiberedOperator(space, [=](std::size_t f) {
    Vec3 yy = Vec3::Zero();
    for (std::size_t d = 0; d < n; ++d) yy[d] = y[d][f];
    const double a = b.cross(yy)[axis];
    return linear_combination({1.0, q * a}, {p, id});
  });
}

std::vector<std::pair<CVec, CVec>> smooth_product_corpus(const LatticeSpace& h, const LatticeSpace& k,
                                                         unsigned seed, int count) {
  const double lh = *std::min_element(h.lengths().begin(), h.lengths().end());
  const double lk = *std::min_element(k.lengths().begin(), k.lengths().end());
  const auto hs = smooth_corpus(h, seed, count, lh / 24.0, lh / 16.0, 0.5);
  const auto ks = smooth_corpus(k, seed + 1000, count, lk / 24.0, lk / 16.0, 0.5);
  std::vector<std::pair<CVec, CVec>> out;
  for (int i = 0; i < count; ++i) out.emplace_back(hs[i], ks[i]);
  return out;
}

MinimalCouplingReport minimal_coupling_check(const LatticeSpace& h, const Vec3& b, double q, bool oracle,
                                             unsigned seed, int corpus) {
  const std::size_t n = spatial_dims(h, b);
  const CompositeSpace cs(h, h, no_axes(n));
  const FiberedOperator w = minimal_coupling_unitary(cs, b, q);
  MinimalCouplingReport rep;
  rep.dimension = cs.size();
  const auto pairs = smooth_product_corpus(h, h, seed, corpus);
  auto [xs, ys] = coupling_generators(cs, b);
  for (std::size_t axis = 0; axis < n; ++axis) {
    const LinearOperator p = momentum_operator(h, axis);
    const FiberedOperator conj = conjugate_by(w, p);
    const FiberedOperator subst = minimal_substitution(cs, b, q, axis);
    const std::vector<double> r = product_residuals(conj, subst, pairs);
    const double worst = *std::max_element(r.begin(), r.end());
    rep.per_axis.push_back(worst);
    rep.closed_residual = std::max(rep.closed_residual, worst);
    if (oracle) {
      const TheoremReport t = theorem1_check(p, cs, xs, ys, q, seed, 4);
      rep.oracle_residual = std::max(rep.oracle_residual, t.residual);
    }
  }
  return rep;
}

GaugeReport gauge_transform(const LatticeSpace& space, const RVec& theta, const RVec& theta2,
                            const Vec3& b, double q, unsigned seed, int corpus) {
  require(static_cast<std::size_t>(theta.size()) == space.size() &&
              static_cast<std::size_t>(theta2.size()) == space.size(),
          "gauge function needs one sample per grid point");
  GaugeReport rep;
  const LinearOperator u = exp_diagonal(LinearOperator::position_diagonal(space, theta), kI);
  const LinearOperator ui = u.adjoint();
  const double l = *std::min_element(space.lengths().begin(), space.lengths().end());
  const auto vs = smooth_corpus(space, seed, corpus, l / 24.0, l / 16.0, 0.5);
  const bool with_field = q != 0.0 && (space.dims() == 3 || (b[0] == 0.0 && b[1] == 0.0));
  std::vector<LinearOperator> a;
  if (with_field) a = vector_potential(b, space);
  for (std::size_t j = 0; j < space.dims(); ++j) {
    const LinearOperator p = momentum_operator(space, j);
    const RVec dth = spectral_derivative(space, theta, j);
    const LinearOperator shifted = p - LinearOperator::position_diagonal(space, dth);
    for (const auto& v : vs) {
      const CVec lhs = u.apply(p.apply(ui.apply(v)));
      rep.momentum_residual = std::max(rep.momentum_residual, (lhs - shifted.apply(v)).norm());
    }
    if (with_field && j < a.size()) {
      const LinearOperator pi = p + q * a[j];
      // A + grad chi with chi = -theta / q.
      const LinearOperator replaced = p + q * (a[j] + LinearOperator::position_diagonal(space, RVec(-dth / q)));
      for (const auto& v : vs) {
        const CVec lhs = u.apply(pi.apply(ui.apply(v)));
        rep.generator_residual = std::max(rep.generator_residual, (lhs - replaced.apply(v)).norm());
      }
    }
  }
  const LinearOperator u2 = exp_diagonal(LinearOperator::position_diagonal(space, theta2), kI);
  const LinearOperator both = exp_diagonal(LinearOperator::position_diagonal(space, RVec(theta + theta2)), kI);
  rep.composition_residual = effect_distance(u * u2, both);
  return rep;
}

double time_gauge_residual(const LatticeSpace& line, double c, unsigned seed, int corpus) {
  require(line.dims() == 1, "energy line must be 1D");
  const double period = 2.0 * kPi / line.spacing(0);
  const RVec tau = -line.momentum_grid(0);
  const RVec th = tau.unaryExpr([&](double t) { return c * std::sin(2.0 * kPi * t / period); });
  const RVec dth = tau.unaryExpr([&](double t) { return c * (2.0 * kPi / period) * std::cos(2.0 * kPi * t / period); });
  const LinearOperator u = exp_diagonal(LinearOperator::momentum_diagonal(line, th), kI);
  const LinearOperator l = position_operator(line, 0);
  const LinearOperator rhs = l - LinearOperator::momentum_diagonal(line, dth);
  const auto vs = smooth_corpus(line, seed, corpus, line.length(0) / 32.0, line.length(0) / 8.0, 0.5);
  double worst = 0.0;
  for (const auto& v : vs)
    worst = std::max(worst, (u.apply(l.apply(u.adjoint().apply(v))) - rhs.apply(v)).norm());
  return worst;
}

namespace {
constexpr double kMetric[4] = {1.0, -1.0, -1.0, -1.0};
}

FieldSample field_from_potential(const LatticeSpace& grid, const std::array<RVec, 4>& a) {
  require(grid.dims() == 4, "field strengths live on a 4D grid");
  std::array<std::array<RVec, 4>, 4> da;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) da[mu][nu] = spectral_derivative(grid, a[nu], mu);
  FieldSample fs;
  fs.grid = grid;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) fs.f[mu][nu] = da[mu][nu] - da[nu][mu];
  return fs;
}

MaxwellReport maxwell_check(const FieldSample& fs) {
  const LatticeSpace& g = fs.grid;
  require(g.dims() == 4, "field strengths live on a 4D grid");
  MaxwellReport rep;
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      require((fs.f[mu][nu] + fs.f[nu][mu]).cwiseAbs().maxCoeff() == 0.0, "field sample is not skew");
      rep.field_max = std::max(rep.field_max, fs.f[mu][nu].cwiseAbs().maxCoeff());
    }
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu)
      for (int rho = nu + 1; rho < 4; ++rho) {
        const RVec cyc = spectral_derivative(g, fs.f[nu][rho], mu) + spectral_derivative(g, fs.f[rho][mu], nu) +
                         spectral_derivative(g, fs.f[mu][nu], rho);
        rep.bianchi = std::max(rep.bianchi, cyc.cwiseAbs().maxCoeff());
      }
  std::array<RVec, 4> j;
  for (int mu = 0; mu < 4; ++mu) {
    j[mu] = RVec::Zero(g.size());
    for (int nu = 0; nu < 4; ++nu) j[mu] += kMetric[nu] * spectral_derivative(g, fs.f[mu][nu], nu);
    rep.current_max = std::max(rep.current_max, j[mu].cwiseAbs().maxCoeff());
  }
  RVec div = RVec::Zero(g.size());
  for (int mu = 0; mu < 4; ++mu) div += kMetric[mu] * spectral_derivative(g, j[mu], mu);
  rep.continuity = div.cwiseAbs().maxCoeff();
  return rep;
}

namespace {
RVec random_modes(const LatticeSpace& grid, std::mt19937_64& rng, int modes, int kmax) {
  std::uniform_int_distribution<int> kd(-kmax, kmax);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * kPi);
  std::normal_distribution<double> amp(0.0, 1.0);
  std::vector<RVec> x;
  for (std::size_t d = 0; d < grid.dims(); ++d) x.push_back(grid.position_grid(d));
  RVec out = RVec::Zero(grid.size());
  for (int m = 0; m < modes; ++m) {
    RVec arg = RVec::Constant(grid.size(), ph(rng));
    for (std::size_t d = 0; d < grid.dims(); ++d) arg += (2.0 * kPi * kd(rng) / grid.length(d)) * x[d];
    out += amp(rng) * arg.array().cos().matrix();
  }
  return out;
}
}  // namespace

std::array<RVec, 4> random_potential(const LatticeSpace& grid, unsigned seed, int modes, int kmax) {
  std::mt19937_64 rng(seed);
  std::array<RVec, 4> a;
  for (auto& c : a) c = random_modes(grid, rng, modes, kmax);
  return a;
}

FieldSample random_skew_field(const LatticeSpace& grid, unsigned seed, int modes, int kmax) {
  std::mt19937_64 rng(seed);
  FieldSample fs;
  fs.grid = grid;
  for (int mu = 0; mu < 4; ++mu) fs.f[mu][mu] = RVec::Zero(grid.size());
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu) {
      fs.f[mu][nu] = random_modes(grid, rng, modes, kmax);
      fs.f[nu][mu] = -fs.f[mu][nu];
    }
  return fs;
}

}  // namespace warplab

#include <algorithm>
#include <cmath>

#include "warplab/electro.hpp"
#include "warplab/state.hpp"

namespace warplab {

LinearOperator landau_hamiltonian(const LatticeSpace& space, double b, double q, double m,
                                  const std::array<RVec, 2>* extra) {
  require(space.dims() == 2, "Landau Hamiltonian is set up on a 2D space");
  require(m > 0.0, "mass must be positive");
  const auto a = vector_potential(Vec3(0.0, 0.0, b), space);
  std::vector<LinearOperator> pis;
  for (std::size_t j = 0; j < 2; ++j) {
    RVec aj = a[j].diagonal_values().real();
    if (extra) aj += (*extra)[j];
    pis.push_back(momentum_operator(space, j) + LinearOperator::position_diagonal(space, RVec(q * aj)));
  }
  const double s = 0.5 / m;
  auto act = [pis, s](const CVec& v) {
    CVec out = CVec::Zero(v.size());
    for (const auto& pi : pis) out += pi.apply(pi.apply(v));
    return CVec(s * out);
  };
  return LinearOperator::functional(space, act, act, true);
}

RitzResult lanczos(const LinearOperator& h, const CVec& start, int steps) {
  require(steps >= 2, "Lanczos needs at least two steps");
  const Eigen::Index n = start.size();
  steps = static_cast<int>(std::min<Eigen::Index>(steps, n));
  CMat q(n, steps);
  RVec alpha(steps), beta(steps);
  q.col(0) = start / start.norm();
  int k = 0;
  for (; k < steps; ++k) {
    CVec w = h.apply(q.col(k));
    alpha[k] = q.col(k).dot(w).real();
    // Full reorthogonalization, twice.
    for (int pass = 0; pass < 2; ++pass) w -= q.leftCols(k + 1) * (q.leftCols(k + 1).adjoint() * w);
    beta[k] = w.norm();
    if (k + 1 < steps) {
      if (beta[k] < 1e-13) {
        ++k;
        break;
      }
      q.col(k + 1) = w / beta[k];
    }
  }
  const int m = std::min(k, steps);
  RMat t = RMat::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    t(i, i) = alpha[i];
    if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
  }
  Eigen::SelfAdjointEigenSolver<RMat> es(t);
  RitzResult r;
  r.values = es.eigenvalues();
  r.weights = es.eigenvectors().row(0).array().square().transpose();
  r.residuals = (beta[m - 1] * es.eigenvectors().row(m - 1).array().abs()).transpose();
  return r;
}

void check_landau_window(const LatticeSpace& space, double b, double q) {
  require(q * b > 0.0, "magnetic length needs qB > 0");
  const double ell = 1.0 / std::sqrt(q * b);
  for (std::size_t d = 0; d < space.dims(); ++d) {
    if (!(3.0 * space.spacing(d) < ell && ell < space.length(d) / 6.0))
      throw PreconditionError("magnetic length " + std::to_string(ell) + " outside (3a, L/6) = (" +
                              std::to_string(3.0 * space.spacing(d)) + ", " +
                              std::to_string(space.length(d) / 6.0) + ")");
  }
}

CVec landau_probe(const LatticeSpace& space, double b, double q, const LandauOptions& opt) {
  // A = B x X has curl 2B, so the effective magnetic length is (2qB)^{-1/2}.
  const double ell2 = 1.0 / (2.0 * q * b);
  const double w = std::sqrt(opt.start_width_sq * ell2);
  return gaussian_state(space, {0.0, 0.0}, {w, w}).unit_vector();
}

double spacing_spread(const RVec& s) {
  if (s.size() == 0) return 0.0;
  return (s.maxCoeff() - s.minCoeff()) / s.mean();
}

double spacing_cv(const RVec& s) {
  if (s.size() < 2) return 0.0;
  const double mu = s.mean();
  return std::sqrt((s.array() - mu).square().sum() / double(s.size())) / mu;
}

LandauSpectrum landau_spectrum(const LatticeSpace& space, double b, double q, double m,
                               const LandauOptions& opt, const std::array<RVec, 2>* extra,
                               const CVec* start) {
  check_landau_window(space, b, q);
  const LinearOperator h = landau_hamiltonian(space, b, q, m, extra);
  const CVec v = start ? *start : landau_probe(space, b, q, opt);
  const RitzResult r = lanczos(h, v, opt.krylov_steps);
  std::vector<double> lv;
  for (Eigen::Index i = 0; i < r.values.size(); ++i)
    if (r.weights[i] > opt.weight_floor && r.residuals[i] < opt.residual_floor) lv.push_back(r.values[i]);
  if (static_cast<int>(lv.size()) < opt.levels)
    throw NumericalError("probe reached only " + std::to_string(lv.size()) + " converged levels");
  lv.resize(opt.levels);
  LandauSpectrum out;
  out.krylov_steps = opt.krylov_steps;
  out.levels = Eigen::Map<RVec>(lv.data(), lv.size());
  out.spacings = out.levels.tail(lv.size() - 1) - out.levels.head(lv.size() - 1);
  out.mean_spacing = out.spacings.mean();
  out.spread = spacing_spread(out.spacings);
  out.ratio_qb_over_m = out.mean_spacing / (q * b / m);
  out.ratio_b_over_2m = out.mean_spacing / (b / (2.0 * m));
  return out;
}

TensorSpectrum tensor_landau_spectrum(const LatticeSpace& space, double b, double q, double m,
                                      int levels) {
  require(space.dims() == 2, "tensor counterpart is set up on a 2D space");
  const RVec k0 = space.momentum_grid(0), k1 = space.momentum_grid(1);
  const RVec y0 = space.position_grid(0), y1 = space.position_grid(1);
  const std::size_t n = space.size();
  std::vector<double> all;
  all.reserve(n * n);
  for (std::size_t y = 0; y < n; ++y) {
    // q A(y) = q B (-y1, y0)
    const double s0 = -q * b * y1[y], s1 = q * b * y0[y];
    for (std::size_t p = 0; p < n; ++p) {
      const double u = k0[p] + s0, v = k1[p] + s1;
      all.push_back((u * u + v * v) / (2.0 * m));
    }
  }
  const std::size_t keep = std::min<std::size_t>(all.size(), 200000);
  std::nth_element(all.begin(), all.begin() + keep - 1, all.end());
  all.resize(keep);
  std::sort(all.begin(), all.end());
  std::vector<double> distinct;
  for (double e : all)
    if (distinct.empty() || e - distinct.back() > 1e-9 * std::max(1.0, std::abs(e))) distinct.push_back(e);
  require(static_cast<int>(distinct.size()) >= levels, "not enough distinct tensor levels");
  distinct.resize(levels);
  TensorSpectrum out;
  out.levels = Eigen::Map<RVec>(distinct.data(), distinct.size());
  out.spacings = out.levels.tail(levels - 1) - out.levels.head(levels - 1);
  out.cv = spacing_cv(out.spacings);
  return out;
}

}  // namespace warplab

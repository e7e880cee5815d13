#include "warplab/state.hpp"

#include <cmath>

namespace warplab {

WaveFunction::WaveFunction(LatticeSpace space, CVec amplitudes, bool normalize)
    : space_(std::move(space)), amps_(std::move(amplitudes)) {
  require(static_cast<std::size_t>(amps_.size()) == space_.size(),
          "wave function must have one amplitude per grid point");
  if (normalize) {
    const double n = norm();
    require(n > 0.0, "cannot normalize a zero wave function");
    amps_ /= n;
    normalized_ = true;
  }
}

double WaveFunction::norm() const { return std::sqrt(amps_.squaredNorm() * space_.cell_volume()); }

WaveFunction WaveFunction::normalized_copy() const { return WaveFunction(space_, amps_, true); }

CVec WaveFunction::unit_vector() const { return amps_ * std::sqrt(space_.cell_volume()); }

WaveFunction WaveFunction::from_unit_vector(const LatticeSpace& space, const CVec& u) {
  WaveFunction w(space, u / std::sqrt(space.cell_volume()), false);
  w.normalized_ = std::abs(u.norm() - 1.0) < 1e-10;
  return w;
}

DensityState::DensityState(const WaveFunction& psi) : space_(psi.space()) {
  CVec u = psi.unit_vector();
  const double n = u.norm();
  require(n > 0.0, "zero state");
  pure_ = u / n;
}

DensityState::DensityState(LatticeSpace space, CMat rho) : space_(std::move(space)), rho_(std::move(rho)) {
  require(static_cast<std::size_t>(rho_.rows()) == space_.size() && rho_.rows() == rho_.cols(),
          "density matrix does not match space");
  require((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() <= 1e-10, "density matrix not Hermitian");
  require(std::abs(rho_.trace() - cplx(1.0)) <= 1e-10, "density matrix trace differs from one");
  Eigen::SelfAdjointEigenSolver<CMat> es(rho_);
  require(es.eigenvalues().minCoeff() >= -1e-10, "density matrix not positive semidefinite");
  for (Eigen::Index i = es.eigenvalues().size(); i-- > 0;)
    comps_.emplace_back(es.eigenvalues()[i], es.eigenvectors().col(i));
}

const CVec& DensityState::pure_vector() const {
  require(pure_.has_value(), "state is mixed");
  return *pure_;
}

CMat DensityState::matrix() const {
  if (pure_) return (*pure_) * pure_->adjoint();
  return rho_;
}

cplx DensityState::expectation(const LinearOperator& op) const {
  require(op.space() == space_, "state and operator live on different spaces");
  if (pure_) return op.expectation(*pure_);
  if (op.kind() == LinearOperator::Kind::Dense) return (rho_ * op.dense_matrix()).trace();
  if (op.kind() == LinearOperator::Kind::Diagonal && op.diagonal_in(no_axes(space_.dims())))
    return (rho_.diagonal().array() * op.rebased(no_axes(space_.dims())).diagonal_values().array()).sum();
  cplx acc = 0.0;
  for (const auto& [w, v] : components()) acc += w * op.expectation(v);
  return acc;
}

std::vector<std::pair<double, CVec>> DensityState::components(double cutoff) const {
  if (pure_) return {{1.0, *pure_}};
  std::vector<std::pair<double, CVec>> out;
  for (const auto& c : comps_)
    if (c.first > cutoff) out.push_back(c);
  return out;
}

WaveFunction gaussian_state(const LatticeSpace& space, const std::vector<double>& center,
                            const std::vector<double>& widths, const std::vector<double>& momentum) {
  require(center.size() == space.dims() && widths.size() == space.dims(),
          "gaussian needs one center and width per axis");
  CVec a(space.size());
  std::vector<RVec> xs;
  for (std::size_t d = 0; d < space.dims(); ++d) xs.push_back(space.axis_positions(d));
  for (std::size_t i = 0; i < space.size(); ++i) {
    double e = 0.0, ph = 0.0;
    for (std::size_t d = 0; d < space.dims(); ++d) {
      const double x = xs[d][space.axis_index(i, d)];
      const double u = (x - center[d]) / widths[d];
      e += 0.25 * u * u;
      if (!momentum.empty()) ph += momentum[d] * x;
    }
    a[i] = std::exp(-e) * std::polar(1.0, ph);
  }
  return WaveFunction(space, a, true);
}

WaveFunction position_delta(const LatticeSpace& space, std::size_t flat_index) {
  CVec a = CVec::Zero(space.size());
  a[flat_index] = 1.0;
  return WaveFunction(space, a, true);
}

CVec random_unit_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  CVec v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = cplx(nd(rng), nd(rng));
  return v.normalized();
}

CMat random_hermitian(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  CMat a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = cplx(nd(rng), nd(rng));
  return 0.5 * (a + a.adjoint());
}

std::vector<DensityState> state_corpus(const LatticeSpace& space, unsigned seed, int pure_count,
                                       int mixed_count) {
  std::mt19937_64 rng(seed);
  std::vector<DensityState> out;
  const std::size_t n = space.size();
  for (int i = 0; i < pure_count; ++i)
    out.emplace_back(WaveFunction::from_unit_vector(space, random_unit_vector(n, rng)));
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  for (int i = 0; i < mixed_count; ++i) {
    CMat rho = CMat::Zero(n, n);
    double total = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double w = 0.2 + ud(rng);
      CVec v = random_unit_vector(n, rng);
      rho += w * v * v.adjoint();
      total += w;
    }
    rho /= total;
    rho = 0.5 * (rho + rho.adjoint());
    out.emplace_back(space, rho);
  }
  return out;
}

std::vector<CVec> smooth_corpus(const LatticeSpace& space, unsigned seed, int count, double width,
                                double center_spread, double momentum_spread) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  std::vector<CVec> out;
  for (int i = 0; i < count; ++i) {
    std::vector<double> c(space.dims()), w(space.dims(), width), k(space.dims());
    for (std::size_t d = 0; d < space.dims(); ++d) {
      c[d] = center_spread * ud(rng);
      k[d] = momentum_spread * ud(rng);
    }
    out.push_back(gaussian_state(space, c, w, k).unit_vector());
  }
  return out;
}

CMat partial_trace_second(const CMat& rho, std::size_t df, std::size_t ds) {
  CMat out = CMat::Zero(df, df);
  for (std::size_t i = 0; i < df; ++i)
    for (std::size_t j = 0; j < df; ++j)
      for (std::size_t k = 0; k < ds; ++k) out(i, j) += rho(i * ds + k, j * ds + k);
  return out;
}

CMat partial_trace_first(const CMat& rho, std::size_t df, std::size_t ds) {
  CMat out = CMat::Zero(ds, ds);
  for (std::size_t i = 0; i < df; ++i)
    for (std::size_t k = 0; k < ds; ++k)
      for (std::size_t l = 0; l < ds; ++l) out(k, l) += rho(i * ds + k, i * ds + l);
  return out;
}

}  // namespace warplab

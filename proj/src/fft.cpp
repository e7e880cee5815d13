#include "warplab/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace warplab {

namespace {

using PlanKey = std::tuple<std::vector<int>, std::vector<bool>, int>;

struct PlanCache {
  std::mutex mu;
  std::map<PlanKey, fftw_plan> plans;
  ~PlanCache() {
    for (auto& kv : plans) fftw_destroy_plan(kv.second);
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

fftw_plan get_plan(const std::vector<int>& shape, const AxisMask& mask, int sign) {
  PlanKey key{shape, mask, sign};
  auto& c = cache();
  std::lock_guard<std::mutex> lock(c.mu);
  auto it = c.plans.find(key);
  if (it != c.plans.end()) return it->second;

  std::vector<fftw_iodim> dims, loops;
  std::size_t stride = 1, total = 1;
  for (std::size_t d = shape.size(); d-- > 0;) {
    fftw_iodim io{shape[d], static_cast<int>(stride), static_cast<int>(stride)};
    (mask[d] ? dims : loops).push_back(io);
    stride *= shape[d];
  }
  total = stride;
  std::vector<cplx> scratch(total);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  fftw_plan p = fftw_plan_guru_dft(static_cast<int>(dims.size()), dims.data(),
                                   static_cast<int>(loops.size()), loops.data(), buf, buf,
                                   sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
  c.plans.emplace(key, p);
  return p;
}

}  // namespace

AxisMask all_axes(std::size_t dims) { return AxisMask(dims, true); }
AxisMask no_axes(std::size_t dims) { return AxisMask(dims, false); }

void fft_inplace(const std::vector<int>& shape, const AxisMask& mask, cplx* data, int sign) {
  require(mask.size() == shape.size(), "axis mask size mismatch");
  double n = 1.0;
  bool any = false;
  std::size_t total = 1;
  for (std::size_t d = 0; d < shape.size(); ++d) {
    total *= shape[d];
    if (mask[d]) {
      n *= shape[d];
      any = true;
    }
  }
  if (!any) return;
  fftw_plan p = get_plan(shape, mask, sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(p, buf, buf);
  const double s = 1.0 / std::sqrt(n);
  for (std::size_t i = 0; i < total; ++i) data[i] *= s;
}

CVec to_basis(const LatticeSpace& space, const AxisMask& mask, const CVec& v) {
  require(static_cast<std::size_t>(v.size()) == space.size(), "vector size does not match space");
  require(!space.index_only() || mask == no_axes(space.dims()), "index space has no Fourier transform");
  CVec out = v;
  fft_inplace(space.shape(), mask, out.data(), -1);
  return out;
}

CVec from_basis(const LatticeSpace& space, const AxisMask& mask, const CVec& v) {
  require(static_cast<std::size_t>(v.size()) == space.size(), "vector size does not match space");
  require(!space.index_only() || mask == no_axes(space.dims()), "index space has no Fourier transform");
  CVec out = v;
  fft_inplace(space.shape(), mask, out.data(), +1);
  return out;
}

CVec to_momentum(const LatticeSpace& space, const CVec& v) {
  return to_basis(space, all_axes(space.dims()), v);
}

CVec to_position(const LatticeSpace& space, const CVec& v) {
  return from_basis(space, all_axes(space.dims()), v);
}

CVec spectral_derivative(const LatticeSpace& space, const CVec& f, std::size_t axis) {
  require(axis < space.dims(), "axis out of range");
  AxisMask mask = no_axes(space.dims());
  mask[axis] = true;
  CVec g = to_basis(space, mask, f);
  const int n = space.points(axis);
  RVec k = space.momentum_grid(axis);
  for (std::size_t i = 0; i < space.size(); ++i) {
    const bool nyquist = space.axis_index(i, axis) == n / 2;
    g[i] *= nyquist ? cplx(0.0) : kI * k[i];
  }
  return from_basis(space, mask, g);
}

RVec spectral_derivative(const LatticeSpace& space, const RVec& f, std::size_t axis) {
  return spectral_derivative(space, CVec(f.cast<cplx>()), axis).real();
}

}  // namespace warplab

#include "warplab/lattice.hpp"

#include <string>

namespace warplab {

LatticeSpace::LatticeSpace(std::vector<int> points, std::vector<double> lengths)
    : points_(std::move(points)), lengths_(std::move(lengths)) {
  require(!points_.empty(), "lattice needs at least one axis");
  require(points_.size() == lengths_.size(), "points and lengths differ in count");
  for (std::size_t d = 0; d < points_.size(); ++d) {
    require(points_[d] >= 4, "points per axis must be >= 4 (axis " + std::to_string(d) + ")");
    require(points_[d] % 2 == 0, "points per axis must be even (axis " + std::to_string(d) + ")");
    require(lengths_[d] > 0.0, "axis length must be positive (axis " + std::to_string(d) + ")");
  }
  strides_.assign(points_.size(), 1);
  for (std::size_t d = points_.size(); d-- > 1;) strides_[d - 1] = strides_[d] * points_[d];
  size_ = strides_[0] * points_[0];
}

LatticeSpace LatticeSpace::index_space(int count) {
  require(count >= 1, "index space needs at least one label");
  LatticeSpace s;
  s.points_ = {count};
  s.lengths_ = {double(count)};
  s.strides_ = {1};
  s.size_ = static_cast<std::size_t>(count);
  s.index_only_ = true;
  return s;
}

double LatticeSpace::cell_volume() const {
  double v = 1.0;
  for (std::size_t d = 0; d < dims(); ++d) v *= spacing(d);
  return v;
}

double folded_frequency(int k, int n, double length) {
  int m = (k <= n / 2) ? k : k - n;
  return 2.0 * kPi * m / length;
}

RVec LatticeSpace::axis_positions(std::size_t axis) const {
  const int n = points(axis);
  RVec x(n);
  for (int j = 0; j < n; ++j) x[j] = -0.5 * length(axis) + j * spacing(axis);
  return x;
}

RVec LatticeSpace::axis_momenta(std::size_t axis) const {
  const int n = points(axis);
  RVec k(n);
  for (int j = 0; j < n; ++j) k[j] = folded_frequency(j, n, length(axis));
  return k;
}

RVec LatticeSpace::position_grid(std::size_t axis) const {
  require(axis < dims(), "axis out of range");
  RVec ax = axis_positions(axis);
  RVec g(size_);
  for (std::size_t i = 0; i < size_; ++i) g[i] = ax[axis_index(i, axis)];
  return g;
}

RVec LatticeSpace::momentum_grid(std::size_t axis) const {
  require(axis < dims(), "axis out of range");
  RVec ax = axis_momenta(axis);
  RVec g(size_);
  for (std::size_t i = 0; i < size_; ++i) g[i] = ax[axis_index(i, axis)];
  return g;
}

std::vector<int> LatticeSpace::unflatten(std::size_t flat) const {
  std::vector<int> idx(dims());
  for (std::size_t d = 0; d < dims(); ++d) idx[d] = axis_index(flat, d);
  return idx;
}

std::size_t LatticeSpace::flatten(const std::vector<int>& idx) const {
  std::size_t f = 0;
  for (std::size_t d = 0; d < dims(); ++d) {
    int i = ((idx[d] % points_[d]) + points_[d]) % points_[d];
    f += strides_[d] * static_cast<std::size_t>(i);
  }
  return f;
}

int LatticeSpace::axis_index(std::size_t flat, std::size_t axis) const {
  return static_cast<int>((flat / strides_[axis]) % points_[axis]);
}

LatticeSpace LatticeSpace::joined(const LatticeSpace& other) const {
  std::vector<int> p = points_;
  std::vector<double> l = lengths_;
  p.insert(p.end(), other.points_.begin(), other.points_.end());
  l.insert(l.end(), other.lengths_.begin(), other.lengths_.end());
  return LatticeSpace(p, l);
}

LatticeSpace make_lattice(std::size_t dims, const std::vector<int>& points,
                          const std::vector<double>& lengths) {
  require(dims >= 1, "dims must be positive");
  require(points.size() == dims && lengths.size() == dims,
          "points/lengths must have one entry per dimension");
  return LatticeSpace(points, lengths);
}

}  // namespace warplab

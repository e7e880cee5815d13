#pragma once

#include <cstddef>
#include <vector>

#include "warplab/types.hpp"

namespace warplab {

// Periodic n-dimensional grid. Flat indices are row-major: the last axis
// varies fastest. Position samples are x_j = -L/2 + j a; momentum samples
// are 2 pi k / L folded to (-pi/a, pi/a] and stored in FFT order.
class LatticeSpace {
 public:
  LatticeSpace() = default;
  LatticeSpace(std::vector<int> points, std::vector<double> lengths);
  // One axis of `count` >= 1 basis labels with unit spacing, for carrying
  // dense matrices. No Fourier transform is defined on it.
  static LatticeSpace index_space(int count);
  bool index_only() const { return index_only_; }

  std::size_t dims() const { return points_.size(); }
  int points(std::size_t axis) const { return points_.at(axis); }
  double length(std::size_t axis) const { return lengths_.at(axis); }
  double spacing(std::size_t axis) const { return lengths_.at(axis) / points_.at(axis); }
  const std::vector<int>& shape() const { return points_; }
  const std::vector<double>& lengths() const { return lengths_; }
  std::size_t size() const { return size_; }
  double cell_volume() const;
  std::size_t stride(std::size_t axis) const { return strides_.at(axis); }

  // One-dimensional sample arrays along an axis.
  RVec axis_positions(std::size_t axis) const;
  RVec axis_momenta(std::size_t axis) const;  // FFT order

  // Coordinate of every flat index (length size()).
  RVec position_grid(std::size_t axis) const;
  RVec momentum_grid(std::size_t axis) const;

  // Multi-index helpers.
  std::vector<int> unflatten(std::size_t flat) const;
  std::size_t flatten(const std::vector<int>& idx) const;
  int axis_index(std::size_t flat, std::size_t axis) const;

  // Concatenate the axes of two spaces (first's axes come first).
  LatticeSpace joined(const LatticeSpace& other) const;

  bool operator==(const LatticeSpace& o) const {
    return points_ == o.points_ && lengths_ == o.lengths_ && index_only_ == o.index_only_;
  }
  bool operator!=(const LatticeSpace& o) const { return !(*this == o); }

 private:
  std::vector<int> points_;
  std::vector<double> lengths_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
  bool index_only_ = false;
};

LatticeSpace make_lattice(std::size_t dims, const std::vector<int>& points,
                          const std::vector<double>& lengths);

// Folded DFT frequency of FFT slot k on an axis of n points and length L.
double folded_frequency(int k, int n, double length);

}  // namespace warplab

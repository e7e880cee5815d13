#pragma once

#include <vector>

#include "warplab/lattice.hpp"

namespace warplab {

// Axis selection for partial transforms: mask[d] == true transforms axis d.
using AxisMask = std::vector<bool>;

AxisMask all_axes(std::size_t dims);
AxisMask no_axes(std::size_t dims);

// Unitary (1/sqrt(N)) DFT along the masked axes of a row-major array, in
// place. sign = -1 maps position samples to momentum (FFT order), +1 back.
void fft_inplace(const std::vector<int>& shape, const AxisMask& mask, cplx* data, int sign);

CVec to_momentum(const LatticeSpace& space, const CVec& v);
CVec to_position(const LatticeSpace& space, const CVec& v);
CVec to_basis(const LatticeSpace& space, const AxisMask& mask, const CVec& v);
CVec from_basis(const LatticeSpace& space, const AxisMask& mask, const CVec& v);

// Spectral derivative along an axis of a periodic function. The Nyquist
// multiplier is zero so real input gives real output.
CVec spectral_derivative(const LatticeSpace& space, const CVec& f, std::size_t axis);
RVec spectral_derivative(const LatticeSpace& space, const RVec& f, std::size_t axis);

}  // namespace warplab

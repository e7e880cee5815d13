#pragma once

#include <vector>

#include "warplab/lattice.hpp"

namespace warplab {

inline constexpr std::size_t kDenseCap = 4096;

// exp(-i t G) for a Hermitian G (dimension <= 4096) via eigendecomposition.
CMat dense_oracle_exponential(const CMat& generator, double t);

// Explicit DFT matrix of a lattice (unitary, same ordering as the FFT path,
// built from the definition rather than from FFTW).
CMat dft_matrix(const LatticeSpace& space);
CMat dense_position(const LatticeSpace& space, std::size_t axis);
CMat dense_momentum(const LatticeSpace& space, std::size_t axis);

CMat kron(const CMat& a, const CMat& b);

// Action of exp(-i t sum_j A_j (x) B_j) for pairwise commuting Hermitian
// terms, each exponentiated through the eigendecompositions of its factors.
// Serves as the brute-force path for composites at the dense cap, where a
// single 4096x4096 exponential is too slow for the test budget.
class KronExponential {
 public:
  KronExponential(const std::vector<std::pair<CMat, CMat>>& terms, double t);
  CVec apply(const CVec& v) const;
  CVec apply_adjoint(const CVec& v) const;
  std::size_t dim_first() const { return dh_; }
  std::size_t dim_second() const { return dk_; }

 private:
  struct Factor {
    CMat u, v;      // eigenvectors of A and B
    CMat phase;     // exp(-i t a_i b_j)
  };
  std::vector<Factor> factors_;
  std::size_t dh_ = 0, dk_ = 0;
};

// (A (x) 1) and (1 (x) B) actions on a composite vector with layout h*dk+k.
CVec apply_first(const CMat& a, const CVec& v, std::size_t dk);
CVec apply_second(const CMat& b, const CVec& v, std::size_t dh);

double unitarity_defect(const CMat& u);

}  // namespace warplab

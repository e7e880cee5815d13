#pragma once

#include <string>
#include <vector>

#include "warplab/composite.hpp"

namespace warplab {

// Real n x n deformation matrix. The default constructor path requires and
// enforces skew symmetry; `general` accepts any real matrix (the warped
// convolution formula is meaningful for it, e.g. a 1x1 scalar).
class DeformationMatrix {
 public:
  DeformationMatrix() = default;
  explicit DeformationMatrix(const RMat& m);
  static DeformationMatrix general(const RMat& m);
  static DeformationMatrix zero(std::size_t n);
  // theta * J with J the standard symplectic form on n = 2k coordinates.
  static DeformationMatrix symplectic(std::size_t n, double theta);

  std::size_t size() const { return static_cast<std::size_t>(m_.rows()); }
  const RMat& matrix() const { return m_; }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  bool skew() const { return skew_; }
  DeformationMatrix scaled(double t) const;

 private:
  RMat m_;
  bool skew_ = true;
};

// alpha_x(T) = exp(i x.G) T exp(-i x.G) for commuting diagonal generators G.
class ActionSpec {
 public:
  explicit ActionSpec(std::vector<LinearOperator> generators);
  const std::vector<LinearOperator>& generators() const { return gens_; }
  const LatticeSpace& space() const { return gens_.front().space(); }
  const AxisMask& basis() const { return basis_; }
  std::size_t size() const { return gens_.size(); }
  // Joint spectral point of each basis vector: row j = (g_1(j), ..., g_n(j)).
  const RMat& spectrum() const { return spec_; }
  LinearOperator act(const RVec& x, const LinearOperator& t) const;

  // Dense matrices in and out of the generator eigenbasis.
  CMat to_generator_basis(const CMat& position_matrix) const;
  CMat from_generator_basis(const CMat& basis_matrix) const;

 private:
  std::vector<LinearOperator> gens_;
  AxisMask basis_;
  RMat spec_;
};

// T_Theta = sum_x alpha_{Theta x}(T) E^G({x}); entrywise in the generator
// basis (T_Theta)_{kj} = T_{kj} exp(i (g_k - g_j).(Theta g_j)). Dense, dim <= 1024.
LinearOperator warped_convolution(const LinearOperator& t, const ActionSpec& action,
                                  const DeformationMatrix& theta);

// A x_Theta B = sum_w alpha_{Theta w}(A) B^(w), B^(w) the part of B carrying
// frequency w under the action. In the generator basis the (k,l,j) term picks
// up exp(i (g_k - g_l).Theta (g_l - g_j)). Theta = 0 gives AB.
LinearOperator rieffel_product(const LinearOperator& a, const LinearOperator& b,
                               const ActionSpec& action, const DeformationMatrix& theta);

// Max over seeded unit vectors of ||(A_Theta B_Theta - (A x_Theta B)_Theta) v||.
double product_compatibility_check(const LinearOperator& a, const LinearOperator& b,
                                   const ActionSpec& action, const DeformationMatrix& theta,
                                   unsigned seed = 1, int probes = 4);

struct TheoremReport {
  double residual = 0.0;      // fibered vs brute-force composite evolution
  std::string dense_path;     // "dense-exponential" or "kron-exponential"
  std::size_t dimension = 0;
  int probes = 0;
};

// Compares the fibered spectral-integral form of W^dagger (T (x) 1) W with a
// brute-force evolution W = exp(-i kappa sum X_mu (x) Y^mu) built from dense
// generator matrices. Composite dimension <= 4096.
TheoremReport theorem1_check(const LinearOperator& t, const CompositeSpace& space,
                             const std::vector<LinearOperator>& xs,
                             const std::vector<LinearOperator>& ys, double kappa,
                             unsigned seed = 1, int probes = 4);

}  // namespace warplab

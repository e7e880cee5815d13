#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "warplab/fft.hpp"
#include "warplab/lattice.hpp"

namespace warplab {

using VecMap = std::function<CVec(const CVec&)>;

// Operator on a LatticeSpace held in a structured representation:
//  - Diagonal: multiplication in a mixed basis (axes in `basis` taken in
//    momentum, the rest in position). `support` lists the axes the values
//    depend on; a diagonal can be re-expressed in any basis that agrees
//    with its own on those axes.
//  - Dense: explicit matrix in the position basis.
//  - Product / Sum: compositions, evaluated lazily.
//  - Functional: matrix-free action (used for fiber reductions).
class LinearOperator {
 public:
  enum class Kind { Diagonal, Dense, Product, Sum, Functional };

  LinearOperator() = default;

  static LinearOperator diagonal(const LatticeSpace& space, CVec values, AxisMask basis,
                                 AxisMask support, bool selfadjoint);
  static LinearOperator position_diagonal(const LatticeSpace& space, CVec values);
  static LinearOperator position_diagonal(const LatticeSpace& space, const RVec& values);
  static LinearOperator momentum_diagonal(const LatticeSpace& space, CVec values);
  static LinearOperator momentum_diagonal(const LatticeSpace& space, const RVec& values);
  static LinearOperator dense(const LatticeSpace& space, CMat m);
  static LinearOperator identity(const LatticeSpace& space, cplx scale = 1.0);
  static LinearOperator functional(const LatticeSpace& space, VecMap action,
                                   std::optional<VecMap> adjoint_action, bool selfadjoint);

  Kind kind() const;
  const LatticeSpace& space() const;
  std::size_t dim() const { return space().size(); }
  bool selfadjoint() const;
  LinearOperator tagged_selfadjoint(bool flag) const;

  CVec apply(const CVec& v) const;
  // Discrete inner product <v|A v>; v is an l2 unit vector.
  cplx expectation(const CVec& v) const;
  CMat to_dense() const;
  LinearOperator adjoint() const;

  // Diagonal accessors (kind() == Diagonal).
  const CVec& diagonal_values() const;
  const AxisMask& basis() const;
  const AxisMask& support() const;
  bool diagonal_in(const AxisMask& basis) const;
  LinearOperator rebased(const AxisMask& basis) const;
  const CMat& dense_matrix() const;

  LinearOperator operator*(const LinearOperator& rhs) const;
  LinearOperator operator+(const LinearOperator& rhs) const;
  LinearOperator operator-(const LinearOperator& rhs) const;
  LinearOperator scaled(cplx c) const;

  struct Node;

 private:
  explicit LinearOperator(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

LinearOperator operator*(cplx c, const LinearOperator& op);

// Lattice position X_axis and momentum P_axis = -i d/dx (spectral).
LinearOperator position_operator(const LatticeSpace& space, std::size_t axis);
LinearOperator momentum_operator(const LatticeSpace& space, std::size_t axis);

// e^{c * A} for a Diagonal A, returned as a Diagonal in the same basis.
LinearOperator exp_diagonal(const LinearOperator& a, cplx c);

// Apply a real function to a selfadjoint Diagonal.
LinearOperator map_diagonal(const LinearOperator& a, const std::function<cplx(cplx)>& f);

// Commutator action [A, B] v.
CVec commutator_apply(const LinearOperator& a, const LinearOperator& b, const CVec& v);

// Linear combination, collapsing diagonals sharing a basis and dense terms.
LinearOperator linear_combination(const std::vector<cplx>& coeffs,
                                  const std::vector<LinearOperator>& ops);

// Max |<phi|A psi> - conj(<psi|A phi>)| over random pairs.
double hermiticity_defect(const LinearOperator& a, unsigned seed, int trials = 4);

}  // namespace warplab

#pragma once

#include <functional>

#include "warplab/state.hpp"

namespace warplab {

// H (x) K. Composite vectors use index h * dim(K) + k, i.e. the row-major
// layout of the joined lattice. The fiber basis selects, per axis of K,
// whether fibers are labelled by position or momentum eigenpoints.
class CompositeSpace {
 public:
  CompositeSpace() = default;
  CompositeSpace(LatticeSpace first, LatticeSpace second, AxisMask fiber_basis);

  const LatticeSpace& first() const { return first_; }
  const LatticeSpace& second() const { return second_; }
  const AxisMask& fiber_basis() const { return basis_; }
  const LatticeSpace& joint() const { return joint_; }
  std::size_t size() const { return joint_.size(); }
  std::size_t fiber_count() const { return second_.size(); }
  AxisMask joint_mask() const;  // K-axes of the joint lattice in the fiber basis

  CVec product(const CVec& h, const CVec& k) const;

 private:
  LatticeSpace first_, second_, joint_;
  AxisMask basis_;
};

using FiberMap = std::function<LinearOperator(std::size_t)>;

// Operator sum_y F_y (x) |y><y| with |y> the fiber-basis eigenvectors of K.
// Fibers are produced on demand and never stored together.
class FiberedOperator {
 public:
  FiberedOperator(CompositeSpace space, FiberMap fiber);

  const CompositeSpace& space() const { return space_; }
  LinearOperator fiber(std::size_t y) const { return fiber_(y); }

  CVec apply(const CVec& composite_vector) const;
  CMat to_dense() const;  // composite dimension <= 4096
  FiberedOperator adjoint() const;
  FiberedOperator compose(const FiberedOperator& rhs) const;

  // (F (x) ...) applied to a product vector h (x) k, returned per fiber:
  // callback(y, amplitude of k at y, F_y h). Avoids forming composite vectors.
  void apply_product(const CVec& h, const CVec& k,
                     const std::function<void(std::size_t, cplx, const CVec&)>& sink) const;

 private:
  CompositeSpace space_;
  FiberMap fiber_;
};

// (A (x) B) v with either factor optional (identity when null).
CVec apply_tensor(const CompositeSpace& space, const LinearOperator* a, const LinearOperator* b,
                  const CVec& v);

// Fiber weights <y|rho|y> of a state on K in the composite's fiber basis.
RVec fiber_weights(const CompositeSpace& space, const DensityState& state_on_second);

// Partial expectation (id (x) omega)[F] = sum_y w_y F_y as a matrix-free
// operator. Fibers whose weight is below floor * max weight are skipped.
LinearOperator reduce_fibered(const FiberedOperator& f, const RVec& weights, double floor = 0.0);

// sqrt(sum_y |k(y)|^2 ||(F_y - G_y) h||^2) for a product vector h (x) k.
double product_residual(const FiberedOperator& f, const FiberedOperator& g, const CVec& h,
                        const CVec& k);
// The same for several product vectors, building each fiber once.
std::vector<double> product_residuals(const FiberedOperator& f, const FiberedOperator& g,
                                      const std::vector<std::pair<CVec, CVec>>& vectors);

// Common diagonal basis of a commuting list of diagonal operators.
AxisMask common_basis(const std::vector<LinearOperator>& ops);

// W = exp(-i kappa sum_mu X_mu (x) Y^mu), fiber y = exp(-i kappa y_mu X_mu).
FiberedOperator fibered_unitary(const CompositeSpace& space, const std::vector<LinearOperator>& xs,
                                const std::vector<LinearOperator>& ys, double kappa);

// W^dagger (T (x) 1) W, fiber y = W_y^dagger T W_y.
FiberedOperator conjugate_by(const FiberedOperator& w, const LinearOperator& t);

// T (x) 1 as a fibered operator.
FiberedOperator lift_first(const CompositeSpace& space, const LinearOperator& t);

// 1 (x) D for D diagonal in the fiber basis.
FiberedOperator lift_second_diagonal(const CompositeSpace& space, const LinearOperator& d);

}  // namespace warplab

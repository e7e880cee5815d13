#pragma once

#include <vector>

#include "warplab/composite.hpp"
#include "warplab/measures.hpp"

namespace warplab {

// Conjugate: the pointer Z is canonically conjugate to the coupled
// apparatus generator Y. Commuting: Z commutes with Y.
enum class PointerRelation { Conjugate, Commuting };

// System H, apparatus K, coupling W = exp(-i kappa X_mu (x) Y^mu), apparatus
// state, pointer Z with its outcome bins, and a pointer function into the
// measured-outcome bins.
struct MeasurementScheme {
  CompositeSpace space;
  std::vector<LinearOperator> xs;
  std::vector<LinearOperator> ys;
  double kappa = 1.0;
  DensityState apparatus;
  LinearOperator pointer;
  OutcomeBinning pointer_bins;
  OutcomeBinning outcome_bins;
  PointerFunction f;
  PointerRelation relation = PointerRelation::Conjugate;

  Pvm pointer_pvm() const;
  // Pointer bins mapped onto outcome bin i.
  std::vector<int> preimage(int outcome) const;
};

// One bin per lattice point, centred on the positions of a 1D lattice.
OutcomeBinning lattice_bins(const LatticeSpace& line);

// Position measurement on a 1D system: X = position on H, Z = position on K,
// Y = momentum on K (Conjugate) or Y = Z (Commuting). The pointer function
// sends pointer reading z to the outcome bin containing z / kappa (periodic).
MeasurementScheme position_scheme(const LatticeSpace& h, const LatticeSpace& k, double kappa,
                                  DensityState apparatus,
                                  PointerRelation relation = PointerRelation::Conjugate);

FiberedOperator coupling_unitary(const MeasurementScheme& s);

// W^dagger (T (x) 1) W with fiber exp(i kappa y.X) T exp(-i kappa y.X).
FiberedOperator heisenberg_conjugate(const MeasurementScheme& s, const LinearOperator& t);

// (id (x) omega_K)[W^dagger (T (x) 1) W].
LinearOperator reduced_evolution(const MeasurementScheme& s, const LinearOperator& t);

// (id (x) omega_K)[W^dagger (T (x) E^Z(f^-1(outcome))) W], matrix-free.
LinearOperator instrument_dual(const MeasurementScheme& s, int outcome, const LinearOperator& t);

struct MeasuredObservable {
  Povm povm;
  double snap_error = 0.0;  // largest |kappa x / w - round(kappa x / w)| in pointer bin units
};

// Closed form: E(D) = sum_x omega_K[E^Z(f^-1(D) - kappa x)] E^X({x}), with the
// pointer law shifted by whole pointer bins (periodically).
MeasuredObservable measured_observable(const MeasurementScheme& s);

// Outcome probabilities from the composite evolution
// (omega (x) omega_K)[W^dagger (1 (x) E^Z(f^-1(D))) W].
RVec composite_statistics(const MeasurementScheme& s, const DensityState& omega);

// max over states and bins of |omega[E(D)] - composite statistics|.
double reproducibility_residual(const MeasurementScheme& s, const Povm& e,
                                const std::vector<DensityState>& corpus);

// Operators K, diagonal in the basis of X, with sum K^dagger K = 1. Member j
// reads outcome bin outcome[j]; a mixed apparatus state contributes one
// member per eigencomponent and pointer point.
struct KrausFamily {
  std::vector<LinearOperator> ops;
  std::vector<int> outcome;
};
KrausFamily kraus_family(const MeasurementScheme& s);

// K^dagger T K, kept diagonal or dense where possible.
LinearOperator sandwich(const LinearOperator& k, const LinearOperator& t);
// Sum of K^dagger T K over family members reading the outcome bin.
LinearOperator kraus_dual(const KrausFamily& fam, int outcome, const LinearOperator& t);

// F(D1 x D2) = E1*_{D1}[E2(D2)], index D1 * n2 + D2.
class BiObservable {
 public:
  BiObservable(OutcomeBinning first, OutcomeBinning second, std::vector<LinearOperator> effects);
  const OutcomeBinning& first() const { return first_; }
  const OutcomeBinning& second() const { return second_; }
  const LinearOperator& effect(int i, int j) const;
  Povm marginal_first() const;
  Povm marginal_second() const;

 private:
  OutcomeBinning first_, second_;
  std::vector<LinearOperator> effects_;
};

BiObservable sequential_joint(const MeasurementScheme& first, const Povm& second);

// Law of the system-momentum shift s = -kappa y imparted by a conjugate
// position scheme, y the apparatus momentum; summing the first outcome turns
// E^P(D) into sum_s w(s) E^P(D - s). Shifts must lie on the momentum lattice of H.
ProbabilityMeasureGrid momentum_kick_law(const MeasurementScheme& s);

}  // namespace warplab

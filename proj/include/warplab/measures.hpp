#pragma once

#include <string>
#include <vector>

#include "warplab/state.hpp"

namespace warplab {

// One-dimensional outcome bins [edges[i], edges[i+1]) with a representative
// point per bin. Uniform binnings support periodic convolution.
struct OutcomeBinning {
  RVec edges;
  RVec reps;

  static OutcomeBinning uniform(int count, double lo, double width);
  // Bins of the given width centred on value = origin + i * width, i in [first, last].
  static OutcomeBinning centered(int first, int last, double width, double origin = 0.0);
  static OutcomeBinning from_edges(const RVec& edges);

  int size() const { return static_cast<int>(reps.size()); }
  double width(int i) const { return edges[i + 1] - edges[i]; }
  bool is_uniform(double tol = 1e-12) const;
  int locate(double value) const;  // -1 when outside the covered range
};

struct ProbabilityMeasureGrid {
  OutcomeBinning binning;
  RVec weights;
  int clamped = 0;  // number of slightly negative weights set to zero

  double mean() const;
  double variance() const;
  double total() const { return weights.sum(); }
};

// Map from source bin index to target bin index (-1 = unmapped).
struct PointerFunction {
  std::vector<int> map;
  int target_count = 0;
  bool invertible = false;

  static PointerFunction identity(int n);
  static PointerFunction collapse(int n);
  static PointerFunction from_map(std::vector<int> map, int target_count);
};

struct PovmReport {
  double completeness = 0.0;  // max |sum_i E_i - 1| entry (dense) or vector estimate
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  double idempotency = 0.0;   // PVM only
  double orthogonality = 0.0; // PVM only
};

class Povm {
 public:
  Povm() = default;
  Povm(LatticeSpace space, OutcomeBinning binning, std::vector<LinearOperator> effects, bool sharp);

  const LatticeSpace& space() const { return space_; }
  const OutcomeBinning& binning() const { return binning_; }
  const std::vector<LinearOperator>& effects() const { return effects_; }
  const LinearOperator& effect(int i) const { return effects_.at(i); }
  int size() const { return static_cast<int>(effects_.size()); }
  bool sharp() const { return sharp_; }

  PovmReport check() const;

 private:
  LatticeSpace space_;
  OutcomeBinning binning_;
  std::vector<LinearOperator> effects_;
  bool sharp_ = false;
};

using Pvm = Povm;

// Spectral measure of a diagonal or Hermitian dense operator on a binning.
// Throws if some spectral weight falls outside the bins (uncovered count in
// the message).
Pvm pvm_of_operator(const LinearOperator& op, const OutcomeBinning& binning);

// Projectors onto eigenvectors whose eigenvalue satisfies lo <= (e + shift) < hi.
LinearOperator spectral_window(const LatticeSpace& space, const RVec& eigenvalues,
                               const CMat& eigenvectors, double lo, double hi, double shift = 0.0);

// (mu * E)(bin m) = sum_n mu(m - n) E(n) on a periodic uniform binning. The
// measure's representatives must be integer multiples of the bin width.
Povm smear(const Povm& e, const ProbabilityMeasureGrid& mu);

// Probability mass of mu * (occupied bins of E) that crosses the periodic seam.
double smear_wrap_mass(const OutcomeBinning& binning, const RVec& occupancy,
                       const ProbabilityMeasureGrid& mu);

// Born weights. Negativity below -1e-8 is an error; above that it is clamped.
ProbabilityMeasureGrid probabilities(const Povm& obs, const DensityState& state);

LinearOperator first_moment(const Povm& obs);

// Sum effects sharing a target bin.
Povm read_scale(const Povm& obs, const PointerFunction& pointer, const OutcomeBinning& target);

// Measure on offsets k * width (k from -n/2 .. n/2 - 1 by default).
ProbabilityMeasureGrid offset_measure(const RVec& weights_by_offset, int first_offset, double width);

// Largest entrywise difference between two effect lists (dense comparison
// for dimension <= 1024, otherwise a seeded vector estimate).
double effect_distance(const LinearOperator& a, const LinearOperator& b);
double povm_distance(const Povm& a, const Povm& b);

}  // namespace warplab

#pragma once

#include <functional>
#include <optional>
#include <random>

#include "warplab/operator.hpp"

namespace warplab {

// Wave function with continuum normalization sum |psi_j|^2 * cell = 1.
class WaveFunction {
 public:
  WaveFunction() = default;
  WaveFunction(LatticeSpace space, CVec amplitudes, bool normalize);

  const LatticeSpace& space() const { return space_; }
  const CVec& amplitudes() const { return amps_; }
  bool normalized() const { return normalized_; }
  double norm() const;  // weighted l2 norm
  WaveFunction normalized_copy() const;
  // Discrete unit vector u = psi * sqrt(cell) (when normalized).
  CVec unit_vector() const;
  static WaveFunction from_unit_vector(const LatticeSpace& space, const CVec& u);

 private:
  LatticeSpace space_;
  CVec amps_;
  bool normalized_ = false;
};

// Pure or mixed state. The dense representation is a trace-one positive
// matrix in the discrete position basis.
class DensityState {
 public:
  DensityState() = default;
  explicit DensityState(const WaveFunction& psi);
  DensityState(LatticeSpace space, CMat rho);

  const LatticeSpace& space() const { return space_; }
  bool is_pure() const { return pure_.has_value(); }
  const CVec& pure_vector() const;  // discrete unit vector
  CMat matrix() const;
  cplx expectation(const LinearOperator& op) const;
  // Eigen-decomposition into (weight, unit vector) pairs, weights > cutoff.
  std::vector<std::pair<double, CVec>> components(double cutoff = 1e-14) const;

 private:
  LatticeSpace space_;
  std::optional<CVec> pure_;
  CMat rho_;
  std::vector<std::pair<double, CVec>> comps_;
};

WaveFunction gaussian_state(const LatticeSpace& space, const std::vector<double>& center,
                            const std::vector<double>& widths,
                            const std::vector<double>& momentum = {});
WaveFunction position_delta(const LatticeSpace& space, std::size_t flat_index);

// Seeded corpus of states: random pure and random mixed (dense).
std::vector<DensityState> state_corpus(const LatticeSpace& space, unsigned seed, int pure_count = 5,
                                       int mixed_count = 2);
CVec random_unit_vector(std::size_t n, std::mt19937_64& rng);
CMat random_hermitian(std::size_t n, std::mt19937_64& rng);

// Band-limited smooth corpus: Gaussians with random centers/momenta chosen
// well inside the box and well below the Nyquist band.
std::vector<CVec> smooth_corpus(const LatticeSpace& space, unsigned seed, int count,
                                double width, double center_spread, double momentum_spread);

// Partial traces of a composite density matrix (first index slow).
CMat partial_trace_second(const CMat& rho, std::size_t dim_first, std::size_t dim_second);
CMat partial_trace_first(const CMat& rho, std::size_t dim_first, std::size_t dim_second);

}  // namespace warplab

#pragma once

#include <vector>

#include "warplab/composite.hpp"
#include "warplab/measures.hpp"

namespace warplab {

// Doubled space C^d (x) C^d of a Hermitian H (d <= 64) at inverse temperature
// beta. L = H (x) 1 - 1 (x) conj(H); Omega = sum_i e^{-beta E_i / 2} v_i (x) conj(v_i) / sqrt(Z).
struct GnsModel {
  LatticeSpace space;  // d^2 basis labels, layout i * d + j
  RVec energies;
  CMat eigenvectors;
  double beta = 0.0;
  LinearOperator liouvillian;
  CVec omega;

  // <Omega, (A (x) 1) Omega>.
  cplx expectation(const CMat& a) const;
  double omega_residual() const;  // ||L Omega||
  RVec liouvillian_spectrum() const;  // sorted E_i - E_j
};

GnsModel build_gns(const CMat& h, double beta);

// T = Q (-P) Q on an energy line, Q the projector off the zero mode. With L
// multiplication by the energy variable, [T, L] = i on smooth vectors that
// vanish near the zero mode and the edges.
class TimeOperator {
 public:
  TimeOperator() = default;
  TimeOperator(LatticeSpace line, std::size_t zero_mode);

  const LatticeSpace& line() const { return line_; }
  std::size_t zero_mode() const { return zero_; }
  const CMat& matrix() const { return m_; }
  LinearOperator op() const;
  // exp(i s T) as a dense matrix.
  CMat exp_i(double s) const;

  // ||([T, L]/i - 1) psi|| for unit psi.
  double commutation_residual(const CVec& psi) const;

 private:
  LatticeSpace line_;
  std::size_t zero_ = 0;
  CMat m_;
  RVec evals_;
  CMat evecs_;
};

struct SpectralLine {
  LatticeSpace line;     // N points on [-Lambda/2, Lambda/2)
  std::size_t zero_mode = 0;
  LinearOperator liouvillian;
  CVec omega;
  TimeOperator time;

  double omega_residual() const;
};

SpectralLine build_spectral_line(int n, double window);

// Band-limited probe vectors on the line, centred at `center` with `width`,
// kept away from the zero mode.
std::vector<CVec> line_corpus(const LatticeSpace& line, double center, double width, unsigned seed, int count);

// Max over probes of the largest binwise gap between the energy law of
// exp(-i s T) psi on a bin and the law of psi on the bin shifted by s. s must
// be a whole number of lattice spacings.
double covariance_residual(const SpectralLine& model, double s, const std::vector<CVec>& probes);

// V = e sum_k E_k <X_k>_phi, with K axis 0 the time-like axis and axes 1.. the
// spatial ones. Throws if phi carries more than 1e-8 mass in the outer eighth
// of any spatial axis.
double potential_identification(double e, const RVec& field, const DensityState& phi);

struct PotentialReport {
  double liouvillian_residual = 0.0;  // reduced deformed L vs L + V on the corpus
  double momentum_residual = 0.0;     // fibered W^dagger (P (x) 1) W vs P - eE (1 (x) X0)
  double omega_block = 0.0;           // Omega row and column of (deformed L - L)
  double oracle_residual = -1.0;      // fibered vs brute-force, -1 when not run
  double potential = 0.0;
  std::size_t dimension = 0;
};

// System: the spectral line (axis 0) times one spatial axis (axis 1). K: a
// time-like axis 0 with T_K = -P and a spatial axis 1. Coupling
// W = exp(i e E (T (x) X_K - X (x) T_K)), fibered over (T_K, X_K).
struct PotentialSetup {
  SpectralLine model;
  LatticeSpace system;  // 2D: energy line x spatial axis
  LatticeSpace pointer; // 2D K
  CompositeSpace space;
  double e = 0.0;
  double field = 0.0;
};

PotentialSetup potential_setup(const SpectralLine& model, int spatial_points, double spatial_length,
                               const LatticeSpace& pointer, double e, double field);

FiberedOperator potential_coupling(const PotentialSetup& s);

PotentialReport potential_deformation(const PotentialSetup& s, const DensityState& phi, bool oracle,
                                      const std::vector<CVec>& corpus, unsigned seed = 1);

// Product corpus on the system: line probes times spatial Gaussians.
std::vector<CVec> system_corpus(const PotentialSetup& s, double center, double width, unsigned seed, int count);

}  // namespace warplab

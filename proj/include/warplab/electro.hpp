#pragma once

#include <array>
#include <vector>

#include "warplab/deform.hpp"
#include "warplab/measurement.hpp"

namespace warplab {

using Vec3 = Eigen::Vector3d;

struct FieldConfig {
  Vec3 B = Vec3::Zero();
  Vec3 E = Vec3::Zero();
  double q = 1.0;
  double e = 1.0;
  double m = 1.0;
  void validate() const;
};

// Theta^{jk} = sum_i eps^{ijk} B_i with eps^{123} = +1.
DeformationMatrix theta_from_B(const Vec3& B);

// 4x4 block layout: row 0 = (0, -E1, -E2, -E3), spatial block theta_from_B.
DeformationMatrix force_matrix(const Vec3& B, const Vec3& E);

// A = B x X componentwise (position-diagonal). On a 2D space X3 = 0 and the
// in-plane components of B must vanish.
std::vector<LinearOperator> vector_potential(const Vec3& B, const LatticeSpace& space);

// W_q = exp(-i q Theta^{jk} X_j (x) X_k) on H (x) K with K in position fibers.
FiberedOperator minimal_coupling_unitary(const CompositeSpace& space, const Vec3& B, double q);

// Fiber y of P_axis (x) 1 + q (1 (x) A_axis): P_axis + q (B x y)_axis.
FiberedOperator minimal_substitution(const CompositeSpace& space, const Vec3& B, double q,
                                     std::size_t axis);

struct MinimalCouplingReport {
  double oracle_residual = -1.0;  // fibered vs brute-force, -1 when not run
  double closed_residual = 0.0;   // vs P + qA on the smooth product corpus
  std::vector<double> per_axis;
  std::size_t dimension = 0;
};

// Compares W^dagger (P_k (x) 1) W with the brute-force evolution (when the
// composite fits under the dense cap and `oracle` is set) and with the
// substituted momentum on smooth product vectors.
MinimalCouplingReport minimal_coupling_check(const LatticeSpace& h, const Vec3& B, double q,
                                             bool oracle, unsigned seed = 1, int corpus = 4);

// Smooth product corpus used for the closed-form comparison: Gaussians on
// both factors, width L/24, centres within L/16 of the origin, small mean momenta.
std::vector<std::pair<CVec, CVec>> smooth_product_corpus(const LatticeSpace& h, const LatticeSpace& k,
                                                         unsigned seed, int count);

// ---------------------------------------------------------------------------
// Landau problem on one space: H = sum_j (P_j + q A_j)^2 / (2m), A = B x X in
// 2D with B along the normal. An optional extra gradient field is added to A.

LinearOperator landau_hamiltonian(const LatticeSpace& space, double b, double q, double m,
                                  const std::array<RVec, 2>* extra_potential = nullptr);

struct RitzResult {
  RVec values;
  RVec weights;    // squared overlap with the start vector
  RVec residuals;  // Lanczos residual estimate per Ritz pair
};

// Lanczos with full reorthogonalization.
RitzResult lanczos(const LinearOperator& h, const CVec& start, int steps);

struct LandauSpectrum {
  RVec levels;        // ascending, one per Landau level reached by the probe
  RVec spacings;
  double spread = 0.0;  // (max - min) / mean of spacings
  double mean_spacing = 0.0;
  double ratio_qb_over_m = 0.0;    // mean spacing / (qB/m)
  double ratio_b_over_2m = 0.0;    // mean spacing / (B/2m)
  double curl_factor = 2.0;        // |curl A| / |B| for A = B x X
  int krylov_steps = 0;
};

struct LandauOptions {
  int levels = 7;
  int krylov_steps = 80;
  double weight_floor = 1e-8;
  double residual_floor = 1e-4;  // eigenvalue error is of order residual^2 / gap
  double start_width_sq = 3.0;  // start-vector variance in units of the effective magnetic length^2
};

// Magnetic length (qB)^{-1/2} must satisfy 3a < l < L/6 on every axis.
void check_landau_window(const LatticeSpace& space, double b, double q);

// Levels reached from a centred isotropic Gaussian. The probe is
// rotation-invariant, so it overlaps with one state per Landau level.
LandauSpectrum landau_spectrum(const LatticeSpace& space, double b, double q, double m,
                               const LandauOptions& opt = {},
                               const std::array<RVec, 2>* extra_potential = nullptr,
                               const CVec* start = nullptr);
CVec landau_probe(const LatticeSpace& space, double b, double q, const LandauOptions& opt = {});

struct TensorSpectrum {
  RVec levels;   // lowest distinct eigenvalues of the fibered Hamiltonian
  RVec spacings;
  double cv = 0.0;  // coefficient of variation of the spacings
};

// Union over fibers y of the spectra of (P + q A(y))^2 / 2m, A(y) = B x y.
TensorSpectrum tensor_landau_spectrum(const LatticeSpace& space, double b, double q, double m,
                                      int levels);

double spacing_spread(const RVec& spacings);
double spacing_cv(const RVec& spacings);

// ---------------------------------------------------------------------------
// Energy smearing and reading the scale.

struct ShiftLaw {
  ProbabilityMeasureGrid law;  // over energy offsets k * width
  double dropped_mass = 0.0;   // pointer-function mass lost off the grid
  double mean_shift = 0.0;
};

// Law of p^2 / 2m under the weight |psi~(B~^+ p)|^2 over the momentum lattice
// of the 2D system h, with B~^+ p = (p2, -p1) / B and psi~ sampled on k.
// Shifts must be multiples of the energy bin width.
ShiftLaw energy_shift_law(const LatticeSpace& h, const LatticeSpace& k, const CVec& psi_tilde,
                          double b, double m, double width);

struct EnergySmearing {
  Povm povm;
  ShiftLaw shift;
  double wrap_mass = 0.0;
};

// Effects sum_s w(s) E^{H0}(D - s).
EnergySmearing energy_smearing(const Pvm& h0, const ShiftLaw& shift);

struct ScaleReading {
  Povm discrete;          // read_scale output on the intervals
  double deviation = 0.0; // max effect distance to E^{H0}(I_n)
  double leakage = 0.0;   // max over H0 eigenstates of the probability read outside their interval
  bool pass = false;
};

// Pointer sending each energy bin to the interval containing its representative.
ScaleReading scale_reading(const Povm& smeared, const OutcomeBinning& intervals, const LinearOperator& h0,
                           double tolerance = 1e-8);

// H0 = sum_n omega (n + 1/2) |h_n><h_n| with h_n the eigenvectors of the
// lattice oscillator (P^2 + X^2) / 2 on a 1D line.
LinearOperator ladder_hamiltonian(const LatticeSpace& line, double omega);

// ---------------------------------------------------------------------------
// Joint position/momentum measurement from a density operator T on a 1D line.

struct JointMeasurement {
  ProbabilityMeasureGrid chi;  // position law of T as offsets
  ProbabilityMeasureGrid eta;  // momentum law of T as offsets
  BiObservable phase_space;
};

OutcomeBinning momentum_bins(const LatticeSpace& line);

// G(j, k) = D_jk (Pi T Pi) D_jk^dagger / N with lattice displacements D and
// parity Pi.
JointMeasurement joint_measurability_construct(const DensityState& t);

// Max per-bin deviation of the phase-space marginals from smear(Q, chi) and
// smear(P, eta).
double marginal_deviation(const BiObservable& g, const ProbabilityMeasureGrid& chi,
                          const ProbabilityMeasureGrid& eta);

// ---------------------------------------------------------------------------
// Gauge transformations U = exp(i theta(X)).

struct GaugeReport {
  double momentum_residual = 0.0;     // U P_j U^-1 vs P_j - d_j theta
  double generator_residual = 0.0;    // U (P + qA) U^-1 vs P + q(A + grad chi), chi = -theta/q
  double composition_residual = 0.0;  // U1 U2 vs exp(i(theta1 + theta2))
};

GaugeReport gauge_transform(const LatticeSpace& space, const RVec& theta, const RVec& theta2,
                            const Vec3& B, double q, unsigned seed = 1, int corpus = 4);

// Residual of U L U^-1 = L - theta'(T) for U = exp(i theta(T)) with T the
// time operator on the energy line; theta(tau) = c sin(2 pi tau / period).
double time_gauge_residual(const LatticeSpace& line, double c, unsigned seed = 1, int corpus = 4);

// ---------------------------------------------------------------------------
// Field strengths on a 4D periodic grid, metric (+, -, -, -).

struct FieldSample {
  LatticeSpace grid;
  std::array<std::array<RVec, 4>, 4> f;  // F_{mu nu}
};

struct MaxwellReport {
  double bianchi = 0.0;
  double continuity = 0.0;
  double current_max = 0.0;
  double field_max = 0.0;
};

FieldSample field_from_potential(const LatticeSpace& grid, const std::array<RVec, 4>& a);
MaxwellReport maxwell_check(const FieldSample& f);

// Real band-limited periodic potential built from a few low Fourier modes.
std::array<RVec, 4> random_potential(const LatticeSpace& grid, unsigned seed, int modes = 6,
                                     int max_wavenumber = 3);
// Skew field with independent random components (not derived from a potential).
FieldSample random_skew_field(const LatticeSpace& grid, unsigned seed, int modes = 6,
                              int max_wavenumber = 3);

}  // namespace warplab

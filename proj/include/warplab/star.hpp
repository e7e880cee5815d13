#pragma once

#include <vector>

#include "warplab/deform.hpp"

namespace warplab {

// Periodic sampled phase-space function. The band is |k_d| < N_d / 4 slots
// per axis, which keeps products of two band-limited symbols alias-free.
class SmoothSymbol {
 public:
  SmoothSymbol() = default;
  SmoothSymbol(LatticeSpace grid, CVec samples);

  const LatticeSpace& grid() const { return grid_; }
  const CVec& samples() const { return samples_; }
  double band_mass() const { return band_mass_; }  // l2 Fourier mass fraction inside the band
  bool band_limited() const { return band_mass_ >= 1.0 - 1e-10; }
  double outside_mass() const { return 1.0 - band_mass_; }

 private:
  LatticeSpace grid_;
  CVec samples_;
  double band_mass_ = 1.0;
};

// c + gradient . x, with x the lattice coordinates (not periodic).
struct AffineSymbol {
  cplx constant = 0.0;
  RVec gradient;
  static AffineSymbol coordinate(std::size_t dims, std::size_t axis);
  CVec sample(const LatticeSpace& grid) const;
};

// Aliasing limit on the Fourier mass of either factor outside the band.
inline constexpr double kAliasLimit = 1e-8;

// (f * g)(x) = sum_k f^(k) e^{ik.x} g(x + Theta k / 2), i.e. Fourier phase
// exp(-i k.Theta l / 2); f * g - g * f = i {f, g} + O(Theta^3).
// FFT path: one spectral shift of g per frequency of f.
SmoothSymbol moyal_product(const SmoothSymbol& f, const SmoothSymbol& g, const DeformationMatrix& theta);

// The same product as a direct sum over pairs of Fourier modes. O(M^2).
SmoothSymbol moyal_product_reference(const SmoothSymbol& f, const SmoothSymbol& g,
                                     const DeformationMatrix& theta);

// Exact products with an affine factor: a * g = a g + (i/2) Theta(grad a, grad g).
SmoothSymbol moyal_product(const AffineSymbol& a, const SmoothSymbol& g, const DeformationMatrix& theta);
SmoothSymbol moyal_product(const SmoothSymbol& g, const AffineSymbol& a, const DeformationMatrix& theta);
// a * b - b * a = i Theta(grad a, grad b), a constant.
cplx star_commutator(const AffineSymbol& a, const AffineSymbol& b, const DeformationMatrix& theta);

// sum_jk Theta_jk d_j f d_k g with spectral derivatives.
SmoothSymbol poisson_bracket(const SmoothSymbol& f, const SmoothSymbol& g, const DeformationMatrix& theta);
double poisson_bracket(const AffineSymbol& a, const AffineSymbol& b, const DeformationMatrix& theta);

double max_abs_difference(const SmoothSymbol& a, const SmoothSymbol& b);

struct ConvergenceRow {
  double t = 0.0;
  double residual = 0.0;
  double slope_so_far = 0.0;  // NaN until two usable rows exist
  bool at_floor = false;      // residual indistinguishable from roundoff; excluded from fits
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  double slope = 0.0;  // least-squares log-log slope over usable rows
  int usable = 0;
};

// Least-squares slope of log r against log t.
double loglog_slope(const std::vector<double>& t, const std::vector<double>& r);

// r(t) = max |(f *_{t Theta} g - g *_{t Theta} f) / (i t) - {f, g}_Theta|.
ConvergenceTable classical_limit_probe(const SmoothSymbol& f, const SmoothSymbol& g,
                                       const DeformationMatrix& theta, const std::vector<double>& ts);

}  // namespace warplab

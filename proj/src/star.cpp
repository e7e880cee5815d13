#include "warplab/star.hpp"

#include <cmath>
#include <limits>

namespace warplab {

namespace {
double band_fraction(const LatticeSpace& grid, const CVec& samples) {
  const CVec s = to_momentum(grid, samples);
  const double total = s.squaredNorm();
  if (total == 0.0) return 1.0;
  double inside = 0.0;
  for (std::size_t m = 0; m < grid.size(); ++m) {
    bool in = true;
    for (std::size_t d = 0; d < grid.dims() && in; ++d) {
      const int n = grid.points(d);
      int slot = grid.axis_index(m, d);
      if (slot > n / 2) slot -= n;
      in = std::abs(slot) < n / 4;
    }
    if (in) inside += std::norm(s[m]);
  }
  return inside / total;
}

void check_pair(const SmoothSymbol& f, const SmoothSymbol& g, const DeformationMatrix& theta) {
  require(f.grid() == g.grid(), "symbols live on different grids");
  require(theta.size() == f.grid().dims(), "deformation size differs from the phase-space dimension");
  if (f.outside_mass() > kAliasLimit || g.outside_mass() > kAliasLimit)
    throw NumericalError("aliasing: Fourier mass outside the band is " +
                         format_number(std::max(f.outside_mass(), g.outside_mass())));
}

RMat momenta(const LatticeSpace& grid) {
  RMat k(grid.size(), grid.dims());
  for (std::size_t d = 0; d < grid.dims(); ++d) k.col(d) = grid.momentum_grid(d);
  return k;
}

RMat offsets(const LatticeSpace& grid) {
  RMat x(grid.size(), grid.dims());
  for (std::size_t d = 0; d < grid.dims(); ++d)
    x.col(d) = grid.position_grid(d).array() + 0.5 * grid.length(d);
  return x;
}

CVec expi(const RVec& phase) {
  return phase.unaryExpr([](double v) { return std::polar(1.0, v); });
}

// Theta(grad a, grad g) when grad_first, Theta(grad g, grad a) otherwise.
CVec gradient_pairing(const LatticeSpace& grid, const RVec& grad, const CVec& g,
                      const DeformationMatrix& theta, bool grad_first) {
  CVec acc = CVec::Zero(g.size());
  for (std::size_t j = 0; j < grid.dims(); ++j)
    for (std::size_t k = 0; k < grid.dims(); ++k) {
      const double th = theta(j, k);
      if (th == 0.0) continue;
      if (grad_first) {
        if (grad[j] != 0.0) acc += (th * grad[j]) * spectral_derivative(grid, g, k);
      } else if (grad[k] != 0.0) {
        acc += (th * grad[k]) * spectral_derivative(grid, g, j);
      }
    }
  return acc;
}
}  // namespace

SmoothSymbol::SmoothSymbol(LatticeSpace grid, CVec samples) : grid_(std::move(grid)), samples_(std::move(samples)) {
  require(static_cast<std::size_t>(samples_.size()) == grid_.size(), "one sample per grid point required");
  band_mass_ = band_fraction(grid_, samples_);
}

AffineSymbol AffineSymbol::coordinate(std::size_t dims, std::size_t axis) {
  require(axis < dims, "coordinate axis out of range");
  AffineSymbol a;
  a.gradient = RVec::Zero(dims);
  a.gradient[axis] = 1.0;
  return a;
}

CVec AffineSymbol::sample(const LatticeSpace& grid) const {
  require(static_cast<std::size_t>(gradient.size()) == grid.dims(), "gradient size differs from grid");
  CVec v = CVec::Constant(grid.size(), constant);
  for (std::size_t d = 0; d < grid.dims(); ++d)
    if (gradient[d] != 0.0) v += (gradient[d] * grid.position_grid(d)).cast<cplx>();
  return v;
}

SmoothSymbol moyal_product(const SmoothSymbol& f, const SmoothSymbol& g, const DeformationMatrix& theta) {
  check_pair(f, g, theta);
  const LatticeSpace& grid = f.grid();
  const RMat k = momenta(grid);
  const RMat x = offsets(grid);
  const CVec fh = to_momentum(grid, f.samples());
  const CVec gh = to_momentum(grid, g.samples());
  const double norm = 1.0 / std::sqrt(double(grid.size()));
  const RMat th = theta.matrix();
  CVec h = CVec::Zero(grid.size());
  for (std::size_t m = 0; m < grid.size(); ++m) {
    if (fh[m] == cplx(0.0)) continue;
    const RVec km = k.row(m).transpose();
    const RVec shift = 0.5 * th * km;
    const CVec gs = to_position(grid, gh.cwiseProduct(expi(k * shift)));
    h += (fh[m] * norm) * expi(x * km).cwiseProduct(gs);
  }
  return SmoothSymbol(grid, h);
}

SmoothSymbol moyal_product_reference(const SmoothSymbol& f, const SmoothSymbol& g,
                                     const DeformationMatrix& theta) {
  check_pair(f, g, theta);
  const LatticeSpace& grid = f.grid();
  const std::size_t n = grid.size(), dims = grid.dims();
  const RMat k = momenta(grid);
  const CVec fh = to_momentum(grid, f.samples());
  const CVec gh = to_momentum(grid, g.samples());
  std::vector<std::vector<int>> idx(n);
  for (std::size_t m = 0; m < n; ++m) idx[m] = grid.unflatten(m);
  const RMat kt = k * theta.matrix();  // row m: k_m^T Theta
  const double norm = 1.0 / std::sqrt(double(n));
  CVec hh = CVec::Zero(n);
  std::vector<int> sum(dims);
  for (std::size_t a = 0; a < n; ++a) {
    if (fh[a] == cplx(0.0)) continue;
    for (std::size_t b = 0; b < n; ++b) {
      if (gh[b] == cplx(0.0)) continue;
      for (std::size_t d = 0; d < dims; ++d) sum[d] = (idx[a][d] + idx[b][d]) % grid.points(d);
      const double ph = -0.5 * kt.row(a).dot(k.row(b));
      hh[grid.flatten(sum)] += norm * fh[a] * gh[b] * std::polar(1.0, ph);
    }
  }
  return SmoothSymbol(grid, to_position(grid, hh));
}

SmoothSymbol moyal_product(const AffineSymbol& a, const SmoothSymbol& g, const DeformationMatrix& theta) {
  const CVec corr = gradient_pairing(g.grid(), a.gradient, g.samples(), theta, true);
  return SmoothSymbol(g.grid(), a.sample(g.grid()).cwiseProduct(g.samples()) + 0.5 * kI * corr);
}

SmoothSymbol moyal_product(const SmoothSymbol& g, const AffineSymbol& a, const DeformationMatrix& theta) {
  const CVec corr = gradient_pairing(g.grid(), a.gradient, g.samples(), theta, false);
  return SmoothSymbol(g.grid(), a.sample(g.grid()).cwiseProduct(g.samples()) + 0.5 * kI * corr);
}

cplx star_commutator(const AffineSymbol& a, const AffineSymbol& b, const DeformationMatrix& theta) {
  return kI * poisson_bracket(a, b, theta);
}

SmoothSymbol poisson_bracket(const SmoothSymbol& f, const SmoothSymbol& g, const DeformationMatrix& theta) {
  require(f.grid() == g.grid(), "symbols live on different grids");
  const LatticeSpace& grid = f.grid();
  require(theta.size() == grid.dims(), "deformation size differs from the phase-space dimension");
  std::vector<CVec> df, dg;
  for (std::size_t d = 0; d < grid.dims(); ++d) {
    df.push_back(spectral_derivative(grid, f.samples(), d));
    dg.push_back(spectral_derivative(grid, g.samples(), d));
  }
  CVec out = CVec::Zero(grid.size());
  for (std::size_t j = 0; j < grid.dims(); ++j)
    for (std::size_t k = 0; k < grid.dims(); ++k)
      if (theta(j, k) != 0.0) out += theta(j, k) * df[j].cwiseProduct(dg[k]);
  return SmoothSymbol(grid, out);
}

double poisson_bracket(const AffineSymbol& a, const AffineSymbol& b, const DeformationMatrix& theta) {
  require(static_cast<std::size_t>(a.gradient.size()) == theta.size() &&
              static_cast<std::size_t>(b.gradient.size()) == theta.size(),
          "gradient size differs from the deformation size");
  return a.gradient.dot(theta.matrix() * b.gradient);
}

double max_abs_difference(const SmoothSymbol& a, const SmoothSymbol& b) {
  require(a.grid() == b.grid(), "symbols live on different grids");
  return (a.samples() - b.samples()).cwiseAbs().maxCoeff();
}

double loglog_slope(const std::vector<double>& t, const std::vector<double>& r) {
  require(t.size() == r.size() && t.size() >= 2, "slope fit needs at least two points");
  const std::size_t n = t.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(t[i]), ly = std::log(r[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceTable classical_limit_probe(const SmoothSymbol& f, const SmoothSymbol& g,
                                       const DeformationMatrix& theta, const std::vector<double>& ts) {
  const SmoothSymbol bracket = poisson_bracket(f, g, theta);
  const double scale = std::max(1.0, (f.samples().cwiseAbs().maxCoeff() * g.samples().cwiseAbs().maxCoeff()));
  ConvergenceTable table;
  std::vector<double> ft, fr;
  for (double t : ts) {
    require(t > 0.0, "deformation scales must be positive");
    const DeformationMatrix th = theta.scaled(t);
    const CVec comm = moyal_product(f, g, th).samples() - moyal_product(g, f, th).samples();
    const CVec diff = comm / (kI * t) - bracket.samples();
    ConvergenceRow row;
    row.t = t;
    row.residual = diff.cwiseAbs().maxCoeff();
    // Roundoff in the commutator is amplified by 1/t.
    row.at_floor = row.residual <= 1e3 * std::numeric_limits<double>::epsilon() * scale / t;
    if (!row.at_floor && row.residual > 0.0) {
      ft.push_back(t);
      fr.push_back(row.residual);
    }
    row.slope_so_far = ft.size() >= 2 ? loglog_slope(ft, fr) : std::numeric_limits<double>::quiet_NaN();
    table.rows.push_back(row);
  }
  table.usable = static_cast<int>(ft.size());
  table.slope = ft.size() >= 2 ? loglog_slope(ft, fr) : std::numeric_limits<double>::quiet_NaN();
  return table;
}

}  // namespace warplab

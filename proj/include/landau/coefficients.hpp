#pragma once

#include <array>
#include <complex>
#include <memory>
#include <vector>

#include "landau/grid.hpp"
#include "landau/report.hpp"

namespace landau {

// Integral of 1/|x| over the unit cube centred at the origin (~2.38008).
double unit_cube_inverse_distance_integral();
// Regularized lattice sum Z = sum'_{d in Z^3} 1/|d| (Epstein zeta at 1/2, ~ -2.8373).
double cubic_lattice_zeta_half();

// Value used for the singular origin cell of the kernel tables.
//  CellAverage: analytic average of 1/(4 pi |v|) over the cell (second order).
//  LatticeCorrected: -Z/(4 pi h), which cancels the h^2 term of the punctured
//  midpoint rule and makes the potential fourth-order accurate.
enum class OriginRule { CellAverage, LatticeCorrected };

// Kernels 1/(4 pi |v|) and Pi(v)/(8 pi |v|) tabulated on the doubled grid
// (m = 2n per axis). Displacement d (in units of h, |d| < n) lives at d mod m.
struct KernelTable {
  VelocityGrid grid;
  int m = 0;
  std::vector<double> scalar;
  std::array<std::vector<double>, 6> matrix;

  std::size_t slot(int dx, int dy, int dz) const;
};

KernelTable build_kernel_table(const VelocityGrid &g,
                               OriginRule rule = OriginRule::LatticeCorrected);

// 0 = scalar kernel, 1..6 = matrix components XX..ZZ.
enum class KernelComponent { Scalar = 0, XX, XY, XZ, YY, YZ, ZZ };

struct CoefficientSet {
  ScalarField a;
  VectorField grad_a;
  SymMatrixField A;
  double c0_hat = 0.0;
  double sup_A = 0.0;
  double max_grad_a = 0.0;
};

// Eigenvalues of a symmetric 3x3 matrix in ascending order (closed form).
std::array<double, 3> sym3_eigenvalues(double xx, double xy, double xz, double yy,
                                       double yz, double zz);

// Zero-padded spectral convolution against the cached kernel spectra of one grid.
class CoefficientEngine {
public:
  explicit CoefficientEngine(const VelocityGrid &g,
                             OriginRule rule = OriginRule::LatticeCorrected);
  ~CoefficientEngine();
  CoefficientEngine(const CoefficientEngine &) = delete;
  CoefficientEngine &operator=(const CoefficientEngine &) = delete;

  const VelocityGrid &grid() const { return grid_; }
  const KernelTable &table() const { return table_; }

  ScalarField convolve(const ScalarField &f, KernelComponent c) const;
  // Throws NumericError when the mass is not positive.
  CoefficientSet compute(const ScalarField &f) const;
  // Same, but accepts f = 0 (floor and sup are then 0).
  CoefficientSet compute_unchecked(const ScalarField &f) const;

  // Shared engine per grid, built on first use.
  static std::shared_ptr<const CoefficientEngine> for_grid(const VelocityGrid &g);

private:
  struct Impl;
  VelocityGrid grid_;
  KernelTable table_;
  std::unique_ptr<Impl> impl_;
};

ScalarField convolve_free_space(const ScalarField &f, KernelComponent c);
CoefficientSet compute_coefficients(const ScalarField &f);

// Fills c0_hat, sup_A and max_grad_a from a, A, grad_a.
void summarize_coefficients(CoefficientSet &cs);

// Five bounds of the coefficient lemma, as LHS / RHS-without-constant.
InequalityReport verify_coefficient_bounds(const ScalarField &f,
                                           const CoefficientSet &cs);

namespace serial {
// O(N^6) direct summation h^3 sum_w K(v - w) f(w); reference oracle.
ScalarField convolve_direct(const ScalarField &f, const KernelTable &t,
                            KernelComponent c);
} // namespace serial

} // namespace landau

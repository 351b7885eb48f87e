#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace landau {

// Cell-centered cube [-l, l]^3 with n nodes per axis, node i at -l + (i + 1/2) h.
struct VelocityGrid {
  int n = 0;
  double l = 0.0;
  double h = 0.0;

  std::size_t size() const { return static_cast<std::size_t>(n) * n * n; }
  double node(int i) const { return -l + (i + 0.5) * h; }
  double cell_volume() const { return h * h * h; }
  // Row-major, v3 fastest.
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n + j) * n + k;
  }
  bool operator==(const VelocityGrid &o) const { return n == o.n && l == o.l; }
};

VelocityGrid make_grid(int n, double l);

struct ScalarField {
  VelocityGrid grid;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(const VelocityGrid &g, double fill = 0.0)
      : grid(g), values(g.size(), fill) {}

  double &operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  double &at(int i, int j, int k) { return values[grid.index(i, j, k)]; }
  double at(int i, int j, int k) const { return values[grid.index(i, j, k)]; }
};

struct VectorField {
  VelocityGrid grid;
  std::array<std::vector<double>, 3> c;

  VectorField() = default;
  explicit VectorField(const VelocityGrid &g) : grid(g) {
    for (auto &v : c)
      v.assign(g.size(), 0.0);
  }
};

// Upper triangle of a symmetric 3x3 matrix: xx, xy, xz, yy, yz, zz.
enum SymIndex { XX = 0, XY = 1, XZ = 2, YY = 3, YZ = 4, ZZ = 5 };

struct SymMatrixField {
  VelocityGrid grid;
  std::array<std::vector<double>, 6> c;

  SymMatrixField() = default;
  explicit SymMatrixField(const VelocityGrid &g) : grid(g) {
    for (auto &v : c)
      v.assign(g.size(), 0.0);
  }
  double entry(std::size_t node, int r, int s) const;
};

// Maps (r, s) in {0,1,2}^2 to its SymIndex slot.
int sym_slot(int r, int s);

// <v> = (1 + |v|^2)^(1/2)
double japanese(double v1, double v2, double v3);
double japanese_pow(double r2, double m);

ScalarField weight_field(const VelocityGrid &g, double m);
ScalarField coordinate_field(const VelocityGrid &g, int axis);

double integrate(const ScalarField &f);
// Integral of w * f, without materializing the product.
double integrate_product(const ScalarField &w, const ScalarField &f);

// Number of negative values clipped by weighted_lp_norm since process start.
std::size_t negative_clip_count();
double weighted_lp_norm(const ScalarField &f, double p, double m);

VectorField gradient(const ScalarField &f);
// Fourth-order interior stencil; used by the diagnostics only.
VectorField gradient_fourth_order(const ScalarField &f);
ScalarField laplacian(const ScalarField &f);
// Componentwise central-difference divergence of a symmetric matrix field.
VectorField divergence(const SymMatrixField &A);

struct LevelSetSplit {
  ScalarField excess;
  ScalarField bulk;
};
LevelSetSplit level_set_split(const ScalarField &f, double ell);

double max_value(const ScalarField &f);
double min_value(const ScalarField &f);

// Binary snapshot: "LCF1", n:u32, l:f64, t:f64, then n^3 f64 (little-endian).
void write_snapshot(const std::string &path, const ScalarField &f, double t);
std::pair<ScalarField, double> read_snapshot(const std::string &path);

} // namespace landau

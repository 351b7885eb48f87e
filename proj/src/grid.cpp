#include "landau/grid.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "landau/parallel.hpp"

namespace landau {

static_assert(std::endian::native == std::endian::little,
              "snapshot I/O assumes a little-endian host");

VelocityGrid make_grid(int n, double l) {
  if (n % 2 != 0)
    throw std::invalid_argument("n must be even");
  if (n < 8)
    throw std::invalid_argument("n must be at least 8");
  if (!(l > 0.0) || !std::isfinite(l))
    throw std::invalid_argument("l must be positive");
  VelocityGrid g;
  g.n = n;
  g.l = l;
  g.h = 2.0 * l / n;
  return g;
}

int sym_slot(int r, int s) {
  static constexpr int table[3][3] = {{XX, XY, XZ}, {XY, YY, YZ}, {XZ, YZ, ZZ}};
  return table[r][s];
}

double SymMatrixField::entry(std::size_t node, int r, int s) const {
  return c[static_cast<std::size_t>(sym_slot(r, s))][node];
}

double japanese(double v1, double v2, double v3) {
  return std::sqrt(1.0 + v1 * v1 + v2 * v2 + v3 * v3);
}

double japanese_pow(double r2, double m) {
  if (m == 0.0)
    return 1.0;
  // log space for large exponents, where pow(1 + r2, m/2) over/underflows early
  if (std::abs(m) > 40.0)
    return std::exp(0.5 * m * std::log1p(r2));
  return std::pow(1.0 + r2, 0.5 * m);
}

ScalarField weight_field(const VelocityGrid &g, double m) {
  ScalarField w(g);
  const int n = g.n;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double x = g.node(i), y = g.node(j), z = g.node(k);
        w.at(i, j, k) = japanese_pow(x * x + y * y + z * z, m);
      }
  return w;
}

ScalarField coordinate_field(const VelocityGrid &g, int axis) {
  ScalarField w(g);
  const int n = g.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        int a = axis == 0 ? i : (axis == 1 ? j : k);
        w.at(i, j, k) = g.node(a);
      }
  return w;
}

double integrate(const ScalarField &f) {
  const auto &g = f.grid;
  const std::size_t slab = static_cast<std::size_t>(g.n) * g.n;
  double s = slab_sum(g.n, [&](int i) {
    double acc = 0.0;
    const double *p = f.values.data() + i * slab;
    for (std::size_t q = 0; q < slab; ++q)
      acc += p[q];
    return acc;
  });
  return s * g.cell_volume();
}

double integrate_product(const ScalarField &w, const ScalarField &f) {
  const auto &g = f.grid;
  const std::size_t slab = static_cast<std::size_t>(g.n) * g.n;
  double s = slab_sum(g.n, [&](int i) {
    double acc = 0.0;
    const std::size_t off = i * slab;
    for (std::size_t q = 0; q < slab; ++q)
      acc += w.values[off + q] * f.values[off + q];
    return acc;
  });
  return s * g.cell_volume();
}

namespace {
std::atomic<std::size_t> g_clipped{0};
}

std::size_t negative_clip_count() { return g_clipped.load(); }

double weighted_lp_norm(const ScalarField &f, double p, double m) {
  if (!(p >= 1.0))
    throw std::invalid_argument("p must be >= 1");
  const auto &g = f.grid;
  const int n = g.n;
  std::vector<std::size_t> neg(static_cast<std::size_t>(n), 0);
  double s = slab_sum(n, [&](int i) {
    double acc = 0.0;
    std::size_t clipped = 0;
    double x = g.node(i);
    for (int j = 0; j < n; ++j) {
      double y = g.node(j);
      for (int k = 0; k < n; ++k) {
        double z = g.node(k);
        double v = f.at(i, j, k);
        if (v < 0.0) {
          ++clipped;
          continue;
        }
        if (v == 0.0)
          continue;
        acc += japanese_pow(x * x + y * y + z * z, m) * std::pow(v, p);
      }
    }
    neg[static_cast<std::size_t>(i)] = clipped;
    return acc;
  });
  std::size_t total = 0;
  for (auto c : neg)
    total += c;
  if (total)
    g_clipped += total;
  return std::pow(s * g.cell_volume(), 1.0 / p);
}

namespace {

// Stride of axis a in the flat layout.
std::size_t stride_of(const VelocityGrid &g, int a) {
  return a == 0 ? static_cast<std::size_t>(g.n) * g.n
                : (a == 1 ? static_cast<std::size_t>(g.n) : 1);
}

int coord_of(const VelocityGrid &g, int i, int j, int k, int a) {
  (void)g;
  return a == 0 ? i : (a == 1 ? j : k);
}

// Second-order first derivative along axis a at (i,j,k).
double d1(const std::vector<double> &f, const VelocityGrid &g, int i, int j, int k,
          int a) {
  const std::size_t s = stride_of(g, a);
  const std::size_t c = g.index(i, j, k);
  const int q = coord_of(g, i, j, k, a);
  const double inv = 1.0 / (2.0 * g.h);
  if (q == 0)
    return (-3.0 * f[c] + 4.0 * f[c + s] - f[c + 2 * s]) * inv;
  if (q == g.n - 1)
    return (3.0 * f[c] - 4.0 * f[c - s] + f[c - 2 * s]) * inv;
  return (f[c + s] - f[c - s]) * inv;
}

double d1_fourth(const std::vector<double> &f, const VelocityGrid &g, int i, int j,
                 int k, int a) {
  const int q = coord_of(g, i, j, k, a);
  if (q < 2 || q > g.n - 3)
    return d1(f, g, i, j, k, a);
  const std::size_t s = stride_of(g, a);
  const std::size_t c = g.index(i, j, k);
  return (f[c - 2 * s] - 8.0 * f[c - s] + 8.0 * f[c + s] - f[c + 2 * s]) /
         (12.0 * g.h);
}

double d2(const std::vector<double> &f, const VelocityGrid &g, int i, int j, int k,
          int a) {
  const std::size_t s = stride_of(g, a);
  const std::size_t c = g.index(i, j, k);
  const int q = coord_of(g, i, j, k, a);
  const double inv = 1.0 / (g.h * g.h);
  if (q == 0)
    return (2.0 * f[c] - 5.0 * f[c + s] + 4.0 * f[c + 2 * s] - f[c + 3 * s]) * inv;
  if (q == g.n - 1)
    return (2.0 * f[c] - 5.0 * f[c - s] + 4.0 * f[c - 2 * s] - f[c - 3 * s]) * inv;
  return (f[c + s] - 2.0 * f[c] + f[c - s]) * inv;
}

} // namespace

VectorField gradient(const ScalarField &f) {
  const auto &g = f.grid;
  VectorField out(g);
  const int n = g.n;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const std::size_t c = g.index(i, j, k);
        for (int a = 0; a < 3; ++a)
          out.c[a][c] = d1(f.values, g, i, j, k, a);
      }
  return out;
}

VectorField gradient_fourth_order(const ScalarField &f) {
  const auto &g = f.grid;
  VectorField out(g);
  const int n = g.n;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const std::size_t c = g.index(i, j, k);
        for (int a = 0; a < 3; ++a)
          out.c[a][c] = d1_fourth(f.values, g, i, j, k, a);
      }
  return out;
}

ScalarField laplacian(const ScalarField &f) {
  const auto &g = f.grid;
  ScalarField out(g);
  const int n = g.n;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        out.at(i, j, k) = d2(f.values, g, i, j, k, 0) + d2(f.values, g, i, j, k, 1) +
                          d2(f.values, g, i, j, k, 2);
  return out;
}

VectorField divergence(const SymMatrixField &A) {
  const auto &g = A.grid;
  VectorField out(g);
  const int n = g.n;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const std::size_t c = g.index(i, j, k);
        for (int r = 0; r < 3; ++r) {
          double s = 0.0;
          for (int a = 0; a < 3; ++a)
            s += d1(A.c[static_cast<std::size_t>(sym_slot(r, a))], g, i, j, k, a);
          out.c[r][c] = s;
        }
      }
  return out;
}

LevelSetSplit level_set_split(const ScalarField &f, double ell) {
  if (!(ell >= 0.0))
    throw std::invalid_argument("level must be nonnegative");
  LevelSetSplit out{ScalarField(f.grid), ScalarField(f.grid)};
  const std::size_t N = f.values.size();
#pragma omp parallel for schedule(static)
  for (std::size_t q = 0; q < N; ++q) {
    double v = f.values[q];
    if (v > ell) {
      out.excess.values[q] = v - ell;
      out.bulk.values[q] = ell;
    } else {
      out.excess.values[q] = 0.0;
      out.bulk.values[q] = v;
    }
  }
  return out;
}

double max_value(const ScalarField &f) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : f.values)
    m = std::max(m, v);
  return m;
}

double min_value(const ScalarField &f) {
  double m = std::numeric_limits<double>::infinity();
  for (double v : f.values)
    m = std::min(m, v);
  return m;
}

void write_snapshot(const std::string &path, const ScalarField &f, double t) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot open snapshot for writing: " + path);
  out.write("LCF1", 4);
  std::uint32_t n = static_cast<std::uint32_t>(f.grid.n);
  out.write(reinterpret_cast<const char *>(&n), sizeof n);
  out.write(reinterpret_cast<const char *>(&f.grid.l), sizeof(double));
  out.write(reinterpret_cast<const char *>(&t), sizeof(double));
  out.write(reinterpret_cast<const char *>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  if (!out)
    throw std::runtime_error("snapshot write failed: " + path);
}

std::pair<ScalarField, double> read_snapshot(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open snapshot: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "LCF1", 4) != 0)
    throw std::runtime_error("bad snapshot magic: " + path);
  std::uint32_t n = 0;
  double l = 0.0, t = 0.0;
  in.read(reinterpret_cast<char *>(&n), sizeof n);
  in.read(reinterpret_cast<char *>(&l), sizeof l);
  in.read(reinterpret_cast<char *>(&t), sizeof t);
  ScalarField f(make_grid(static_cast<int>(n), l));
  in.read(reinterpret_cast<char *>(f.values.data()),
          static_cast<std::streamsize>(f.values.size() * sizeof(double)));
  if (!in)
    throw std::runtime_error("truncated snapshot: " + path);
  return {std::move(f), t};
}

} // namespace landau

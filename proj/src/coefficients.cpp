#include "landau/coefficients.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "landau/errors.hpp"
#include "landau/parallel.hpp"

namespace landau {

namespace {
constexpr double kPi = std::numbers::pi;
std::mutex g_planner_mutex; // FFTW's planner is not re-entrant
} // namespace

double unit_cube_inverse_distance_integral() {
  // Six pyramids with apex at the origin; along each ray the radial integral is
  // elementary, leaving (6/4) * int_{[-1/2,1/2]^2} dy dz / sqrt(1/4 + y^2 + z^2).
  using boost::math::quadrature::gauss;
  static const double value = [] {
    auto inner = [](double y) {
      return gauss<double, 40>::integrate(
          [y](double z) { return 1.0 / std::sqrt(0.25 + y * y + z * z); }, -0.5, 0.5);
    };
    return 1.5 * gauss<double, 40>::integrate(inner, -0.5, 0.5);
  }();
  return value;
}

double cubic_lattice_zeta_half() {
  // Ewald split of the theta-function representation:
  // Z = sum'_d [erfc(sqrt(pi)|d|)/|d| + exp(-pi|d|^2)/(pi|d|^2)] - 3
  static const double value = [] {
    const int R = 7;
    const double sp = std::sqrt(kPi);
    double s = 0.0;
    for (int a = -R; a <= R; ++a)
      for (int b = -R; b <= R; ++b)
        for (int c = -R; c <= R; ++c) {
          if (a == 0 && b == 0 && c == 0)
            continue;
          const double r2 = double(a * a + b * b + c * c);
          const double r = std::sqrt(r2);
          s += std::erfc(sp * r) / r + std::exp(-kPi * r2) / (kPi * r2);
        }
    return s - 3.0;
  }();
  return value;
}

std::size_t KernelTable::slot(int dx, int dy, int dz) const {
  auto w = [this](int d) { return static_cast<std::size_t>((d % m + m) % m); };
  return (w(dx) * m + w(dy)) * m + w(dz);
}

KernelTable build_kernel_table(const VelocityGrid &g, OriginRule rule) {
  KernelTable t;
  t.grid = g;
  t.m = 2 * g.n;
  const std::size_t total = static_cast<std::size_t>(t.m) * t.m * t.m;
  t.scalar.assign(total, 0.0);
  for (auto &c : t.matrix)
    c.assign(total, 0.0);

  const int n = g.n;
  const double h = g.h;
  const double origin_scalar =
      (rule == OriginRule::CellAverage ? unit_cube_inverse_distance_integral()
                                       : -cubic_lattice_zeta_half()) /
      (4.0 * kPi * h);

#pragma omp parallel for schedule(static)
  for (int dx = -n + 1; dx < n; ++dx)
    for (int dy = -n + 1; dy < n; ++dy)
      for (int dz = -n + 1; dz < n; ++dz) {
        const std::size_t s = t.slot(dx, dy, dz);
        if (dx == 0 && dy == 0 && dz == 0) {
          // isotropic average of Pi is (2/3) Id, so each diagonal entry is
          // (2/3) * (origin value of 1/(8 pi |v|)) = origin_scalar / 3;
          // by cubic symmetry the same holds for the lattice correction
          t.scalar[s] = origin_scalar;
          t.matrix[XX][s] = t.matrix[YY][s] = t.matrix[ZZ][s] = origin_scalar / 3.0;
          continue;
        }
        const double v[3] = {dx * h, dy * h, dz * h};
        const double r2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        const double r = std::sqrt(r2);
        t.scalar[s] = 1.0 / (4.0 * kPi * r);
        const double c = 1.0 / (8.0 * kPi * r);
        for (int a = 0; a < 3; ++a)
          for (int b = a; b < 3; ++b)
            t.matrix[static_cast<std::size_t>(sym_slot(a, b))][s] =
                c * ((a == b ? 1.0 : 0.0) - v[a] * v[b] / r2);
      }
  return t;
}

std::array<double, 3> sym3_eigenvalues(double xx, double xy, double xz, double yy,
                                       double yz, double zz) {
  const double p1 = xy * xy + xz * xz + yz * yz;
  if (p1 == 0.0) {
    std::array<double, 3> e{xx, yy, zz};
    std::sort(e.begin(), e.end());
    return e;
  }
  const double q = (xx + yy + zz) / 3.0;
  const double p2 =
      (xx - q) * (xx - q) + (yy - q) * (yy - q) + (zz - q) * (zz - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  const double b11 = (xx - q) / p, b22 = (yy - q) / p, b33 = (zz - q) / p;
  const double b12 = xy / p, b13 = xz / p, b23 = yz / p;
  const double det = b11 * (b22 * b33 - b23 * b23) - b12 * (b12 * b33 - b23 * b13) +
                     b13 * (b12 * b23 - b22 * b13);
  const double r = std::clamp(det / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double e1 = q + 2.0 * p * std::cos(phi);
  const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * kPi / 3.0);
  const double e2 = 3.0 * q - e1 - e3;
  return {e3, e2, e1};
}

struct CoefficientEngine::Impl {
  int m = 0;
  std::size_t real_size = 0;
  std::size_t complex_size = 0;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  std::array<fftw_complex *, 7> spectra{};

  ~Impl() {
    std::lock_guard<std::mutex> lock(g_planner_mutex);
    for (auto *s : spectra)
      if (s)
        fftw_free(s);
    if (forward)
      fftw_destroy_plan(forward);
    if (backward)
      fftw_destroy_plan(backward);
  }
};

namespace {

const std::vector<double> &component_table(const KernelTable &t, KernelComponent c) {
  if (c == KernelComponent::Scalar)
    return t.scalar;
  return t.matrix[static_cast<std::size_t>(static_cast<int>(c) - 1)];
}

} // namespace

CoefficientEngine::CoefficientEngine(const VelocityGrid &g, OriginRule rule)
    : grid_(g), table_(build_kernel_table(g, rule)), impl_(std::make_unique<Impl>()) {
  configure_threads();
  auto &im = *impl_;
  im.m = 2 * g.n;
  const int m = im.m;
  im.real_size = static_cast<std::size_t>(m) * m * m;
  im.complex_size = static_cast<std::size_t>(m) * m * (m / 2 + 1);

  double *rbuf = fftw_alloc_real(im.real_size);
  fftw_complex *cbuf = fftw_alloc_complex(im.complex_size);
  {
    std::lock_guard<std::mutex> lock(g_planner_mutex);
    // FFTW_ESTIMATE keeps plan selection, and hence round-off, reproducible.
    im.forward = fftw_plan_dft_r2c_3d(m, m, m, rbuf, cbuf, FFTW_ESTIMATE);
    im.backward = fftw_plan_dft_c2r_3d(m, m, m, cbuf, rbuf, FFTW_ESTIMATE);
    for (auto &s : im.spectra)
      s = fftw_alloc_complex(im.complex_size);
  }
  for (int c = 0; c < 7; ++c) {
    const auto &src = component_table(table_, static_cast<KernelComponent>(c));
    std::copy(src.begin(), src.end(), rbuf);
    fftw_execute_dft_r2c(im.forward, rbuf, im.spectra[static_cast<std::size_t>(c)]);
  }
  fftw_free(rbuf);
  fftw_free(cbuf);
}

CoefficientEngine::~CoefficientEngine() = default;

namespace {

struct Buffers {
  double *real;
  fftw_complex *fhat;
  fftw_complex *work;
  std::size_t rsize, csize;
  Buffers(std::size_t r, std::size_t c)
      : real(fftw_alloc_real(r)), fhat(fftw_alloc_complex(c)),
        work(fftw_alloc_complex(c)), rsize(r), csize(c) {}
  ~Buffers() {
    fftw_free(real);
    fftw_free(fhat);
    fftw_free(work);
  }
  Buffers(const Buffers &) = delete;
  Buffers &operator=(const Buffers &) = delete;
};

void pad_into(const ScalarField &f, int m, double *real) {
  const int n = f.grid.n;
  std::fill(real, real + static_cast<std::size_t>(m) * m * m, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double *src = f.values.data() + f.grid.index(i, j, 0);
      double *dst = real + (static_cast<std::size_t>(i) * m + j) * m;
      std::copy(src, src + n, dst);
    }
}

void extract_from(const double *real, int m, double scale, ScalarField &out) {
  const int n = out.grid.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double *src = real + (static_cast<std::size_t>(i) * m + j) * m;
      double *dst = out.values.data() + out.grid.index(i, j, 0);
      for (int k = 0; k < n; ++k)
        dst[k] = src[k] * scale;
    }
}

void multiply(const fftw_complex *a, const fftw_complex *b, fftw_complex *out,
              std::size_t size) {
#pragma omp parallel for schedule(static)
  for (std::size_t q = 0; q < size; ++q) {
    const double re = a[q][0] * b[q][0] - a[q][1] * b[q][1];
    const double im = a[q][0] * b[q][1] + a[q][1] * b[q][0];
    out[q][0] = re;
    out[q][1] = im;
  }
}

} // namespace

ScalarField CoefficientEngine::convolve(const ScalarField &f, KernelComponent c) const {
  if (!(f.grid == grid_))
    throw std::invalid_argument("field grid does not match engine grid");
  const auto &im = *impl_;
  Buffers buf(im.real_size, im.complex_size);
  pad_into(f, im.m, buf.real);
  fftw_execute_dft_r2c(im.forward, buf.real, buf.fhat);
  multiply(buf.fhat, im.spectra[static_cast<std::size_t>(static_cast<int>(c))], buf.work,
           im.complex_size);
  fftw_execute_dft_c2r(im.backward, buf.work, buf.real);
  ScalarField out(grid_);
  extract_from(buf.real, im.m, grid_.cell_volume() / static_cast<double>(im.real_size),
               out);
  return out;
}

void summarize_coefficients(CoefficientSet &cs) {
  const auto &g = cs.a.grid;
  const int n = g.n;
  const std::size_t slab = static_cast<std::size_t>(n) * n;
  std::vector<double> lo(static_cast<std::size_t>(n)), hi(static_cast<std::size_t>(n)),
      gmax(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    double mn = std::numeric_limits<double>::infinity();
    double mx = 0.0, gm = 0.0;
    const double x = g.node(i);
    for (int j = 0; j < n; ++j) {
      const double y = g.node(j);
      for (int k = 0; k < n; ++k) {
        const double z = g.node(k);
        const std::size_t q = g.index(i, j, k);
        const auto &A = cs.A.c;
        auto e = sym3_eigenvalues(A[XX][q], A[XY][q], A[XZ][q], A[YY][q], A[YZ][q],
                                  A[ZZ][q]);
        const double w = std::pow(1.0 + x * x + y * y + z * z, 1.5);
        mn = std::min(mn, w * e[0]);
        mx = std::max(mx, e[2]);
        const double ga = std::sqrt(cs.grad_a.c[0][q] * cs.grad_a.c[0][q] +
                                    cs.grad_a.c[1][q] * cs.grad_a.c[1][q] +
                                    cs.grad_a.c[2][q] * cs.grad_a.c[2][q]);
        gm = std::max(gm, ga);
      }
    }
    (void)slab;
    lo[static_cast<std::size_t>(i)] = mn;
    hi[static_cast<std::size_t>(i)] = mx;
    gmax[static_cast<std::size_t>(i)] = gm;
  }
  cs.c0_hat = *std::min_element(lo.begin(), lo.end());
  cs.sup_A = *std::max_element(hi.begin(), hi.end());
  cs.max_grad_a = *std::max_element(gmax.begin(), gmax.end());
}

CoefficientSet CoefficientEngine::compute_unchecked(const ScalarField &f) const {
  if (!(f.grid == grid_))
    throw std::invalid_argument("field grid does not match engine grid");
  const auto &im = *impl_;
  Buffers buf(im.real_size, im.complex_size);
  pad_into(f, im.m, buf.real);
  fftw_execute_dft_r2c(im.forward, buf.real, buf.fhat);
  const double scale = grid_.cell_volume() / static_cast<double>(im.real_size);

  CoefficientSet cs;
  cs.a = ScalarField(grid_);
  cs.A = SymMatrixField(grid_);
  ScalarField tmp(grid_);
  for (int c = 0; c < 7; ++c) {
    multiply(buf.fhat, im.spectra[static_cast<std::size_t>(c)], buf.work,
             im.complex_size);
    fftw_execute_dft_c2r(im.backward, buf.work, buf.real);
    extract_from(buf.real, im.m, scale, tmp);
    if (c == 0)
      cs.a.values = tmp.values;
    else
      cs.A.c[static_cast<std::size_t>(c - 1)] = tmp.values;
  }
  cs.grad_a = gradient(cs.a);
  summarize_coefficients(cs);
  return cs;
}

CoefficientSet CoefficientEngine::compute(const ScalarField &f) const {
  const double mass = integrate(f);
  if (!(mass > 0.0))
    throw NumericError("coefficients undefined: total mass is not positive");
  return compute_unchecked(f);
}

std::shared_ptr<const CoefficientEngine> CoefficientEngine::for_grid(const VelocityGrid &g) {
  static std::mutex mu;
  static std::map<std::pair<int, double>, std::shared_ptr<const CoefficientEngine>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(g.n, g.l);
  auto it = cache.find(key);
  if (it != cache.end())
    return it->second;
  auto e = std::make_shared<const CoefficientEngine>(g);
  cache.emplace(key, e);
  return e;
}

ScalarField convolve_free_space(const ScalarField &f, KernelComponent c) {
  return CoefficientEngine::for_grid(f.grid)->convolve(f, c);
}

CoefficientSet compute_coefficients(const ScalarField &f) {
  return CoefficientEngine::for_grid(f.grid)->compute(f);
}

InequalityReport verify_coefficient_bounds(const ScalarField &f,
                                           const CoefficientSet &cs) {
  InequalityReport r;
  r.name = "coefficient_bounds";
  const auto &g = f.grid;
  const double l1 = weighted_lp_norm(f, 1.0, 0.0);
  const double linf = std::max(max_value(f), 0.0);
  const double l12 = weighted_lp_norm(f, 1.2, 0.0);
  const double l2 = weighted_lp_norm(f, 2.0, 0.0);
  const double l4m = weighted_lp_norm(f, 4.0, 10.0);

  double grad_a_sup = cs.max_grad_a;
  // sup <v>^2 (|grad a| + |grad A|), the gradient of A taken entrywise (Frobenius)
  std::array<VectorField, 6> dA;
  for (int s = 0; s < 6; ++s) {
    ScalarField comp(g);
    comp.values = cs.A.c[static_cast<std::size_t>(s)];
    dA[static_cast<std::size_t>(s)] = gradient(comp);
  }
  double weighted_sup = 0.0;
  const int n = g.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const std::size_t q = g.index(i, j, k);
        double ga = 0.0;
        for (int a = 0; a < 3; ++a)
          ga += cs.grad_a.c[a][q] * cs.grad_a.c[a][q];
        double gA = 0.0;
        for (int s = 0; s < 6; ++s) {
          const double mult = (s == XY || s == XZ || s == YZ) ? 2.0 : 1.0;
          for (int a = 0; a < 3; ++a)
            gA += mult * dA[static_cast<std::size_t>(s)].c[a][q] *
                  dA[static_cast<std::size_t>(s)].c[a][q];
        }
        const double x = g.node(i), y = g.node(j), z = g.node(k);
        const double w = 1.0 + x * x + y * y + z * z;
        weighted_sup = std::max(weighted_sup, w * (std::sqrt(ga) + std::sqrt(gA)));
      }

  auto ratio = [](double lhs, double rhs) {
    if (rhs == 0.0 && lhs == 0.0)
      return std::numeric_limits<double>::quiet_NaN();
    return lhs / rhs;
  };
  // q = infinity in the L1/Lq forms; p = 1.2 and p = 2 in the Lp/Linf forms
  r.add("A_L1_Linf", ratio(cs.sup_A, std::pow(l1, 2.0 / 3.0) * std::cbrt(linf)));
  r.add("A_Lp1.2_Linf", ratio(cs.sup_A, std::pow(l12, 0.8) * std::pow(linf, 0.2)));
  r.add("grad_a_L1_Linf", ratio(grad_a_sup, std::cbrt(l1) * std::pow(linf, 2.0 / 3.0)));
  r.add("grad_a_Lp2_Linf",
        ratio(grad_a_sup, std::pow(l2, 2.0 / 3.0) * std::cbrt(linf)));
  r.add("weighted_gradients_L4_10", ratio(weighted_sup, l4m));
  finalize_bounds(r);
  return r;
}

namespace serial {

ScalarField convolve_direct(const ScalarField &f, const KernelTable &t,
                            KernelComponent c) {
  const auto &g = f.grid;
  const auto &K = component_table(t, c);
  const int n = g.n;
  ScalarField out(g);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            for (int d = 0; d < n; ++d)
              s += K[t.slot(i - a, j - b, k - d)] * f.at(a, b, d);
        out.at(i, j, k) = s * g.cell_volume();
      }
  return out;
}

} // namespace serial

} // namespace landau

#include "landau/initial_data.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "landau/errors.hpp"
#include "landau/format.hpp"
#include "landau/inequalities.hpp"
#include "landau/parallel.hpp"

namespace landau {

namespace {

using Profile = std::function<double(double, double, double)>;

struct Gaussian {
  std::array<double, 3> c;
  double sigma;
  double weight;
};

Profile make_profile(const InitialDataConfig &c) {
  const std::string &fam = c.family;
  if (fam == "maxwellian") {
    const double s = c.sigma.value_or(1.0);
    const double norm = 1.0 / std::pow(2.0 * std::numbers::pi * s * s, 1.5);
    return [=](double x, double y, double z) {
      return norm * std::exp(-(x * x + y * y + z * z) / (2.0 * s * s));
    };
  }
  if (fam == "bimaxwellian") {
    const double s = c.sigma.value_or(1.0);
    const double d = c.drift;
    return [=](double x, double y, double z) {
      const double r2 = y * y + z * z;
      return 0.5 * (std::exp(-((x - d) * (x - d) + r2) / (2.0 * s * s)) +
                    std::exp(-((x + d) * (x + d) + r2) / (2.0 * s * s)));
    };
  }
  if (fam == "narrow_gaussian") {
    const double s = c.sigma.value_or(0.5);
    return [=](double x, double y, double z) {
      return std::exp(-(x * x + y * y + z * z) / (2.0 * s * s));
    };
  }
  if (fam == "polytail") {
    // Gaussian core (f ~ 1 on a ball) plus tail * <v>^{-k}; a pure power profile with
    // energy 3 leaves too much mass near the box edge for k close to 9
    const double s = c.sigma.value_or(1.0);
    const double k = c.k;
    const double tau = c.tail;
    return [=](double x, double y, double z) {
      const double r2 = x * x + y * y + z * z;
      return std::exp(-r2 / (2.0 * s * s)) + tau * std::pow(1.0 + r2, -0.5 * k);
    };
  }
  // mixture
  Random rng(c.seed);
  const double s = c.sigma.value_or(0.8);
  std::vector<Gaussian> comps;
  for (int i = 0; i < c.components; ++i) {
    Gaussian gc;
    for (double &v : gc.c)
      v = rng.uniform(-1.5, 1.5);
    gc.sigma = s * rng.uniform(0.7, 1.3);
    gc.weight = rng.uniform(0.5, 1.0);
    comps.push_back(gc);
  }
  return [comps](double x, double y, double z) {
    double acc = 0.0;
    for (const auto &gc : comps) {
      const double dx = x - gc.c[0], dy = y - gc.c[1], dz = z - gc.c[2];
      acc += gc.weight * std::exp(-(dx * dx + dy * dy + dz * dz) / (2.0 * gc.sigma * gc.sigma));
    }
    return acc;
  };
}

bool symmetric_family(const std::string &fam) {
  return fam == "maxwellian" || fam == "bimaxwellian" || fam == "narrow_gaussian" ||
         fam == "polytail";
}

struct Moments {
  double mass = 0.0;
  std::array<double, 3> p{};
  double energy = 0.0;
  double tail = 0.0;
};

Moments moments(const ScalarField &f) {
  const auto &g = f.grid;
  const int n = g.n;
  const double half = 0.5 * g.l;
  std::array<double, 6> acc{};
  std::vector<std::array<double, 6>> parts(n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    std::array<double, 6> a{};
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double v = f.at(i, j, k);
        const double x = g.node(i), y = g.node(j), z = g.node(k);
        const double r2 = x * x + y * y + z * z;
        a[0] += v;
        a[1] += x * v;
        a[2] += y * v;
        a[3] += z * v;
        a[4] += r2 * v;
        if (r2 > half * half)
          a[5] += v;
      }
    parts[i] = a;
  }
  for (const auto &a : parts)
    for (int q = 0; q < 6; ++q)
      acc[q] += a[q];
  const double h3 = g.cell_volume();
  Moments m;
  m.mass = acc[0] * h3;
  m.p = {acc[1] * h3, acc[2] * h3, acc[3] * h3};
  m.energy = acc[4] * h3;
  m.tail = acc[5] * h3;
  return m;
}

void sample(ScalarField &f, const Profile &F, double alpha, const std::array<double, 3> &u,
            double s) {
  const auto &g = f.grid;
  const int n = g.n;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        f.at(i, j, k) = alpha * F((g.node(i) - u[0]) / s, (g.node(j) - u[1]) / s,
                                  (g.node(k) - u[2]) / s);
}

} // namespace

InitialData make_initial_data(const InitialDataConfig &c, const VelocityGrid &g) {
  configure_threads();
  const Profile F = make_profile(c);
  const bool fix_energy = c.normalize_energy.value_or(c.family != "narrow_gaussian");
  const bool recenter = !symmetric_family(c.family);

  InitialData out;
  out.family = c.family;
  out.f = ScalarField(g);
  double alpha = 1.0, s = 1.0;
  std::array<double, 3> u{};
  Moments m;
  for (int it = 0; it < 100; ++it) {
    sample(out.f, F, alpha, u, s);
    m = moments(out.f);
    out.iterations = it + 1;
    if (!(m.mass > 0.0) || !std::isfinite(m.mass))
      throw ConfigError("initial_data: profile has no mass on the grid");
    const std::array<double, 3> mean = {m.p[0] / m.mass, m.p[1] / m.mass, m.p[2] / m.mass};
    const double spread =
        m.energy / m.mass - (mean[0] * mean[0] + mean[1] * mean[1] + mean[2] * mean[2]);
    const bool done = std::abs(m.mass - 1.0) < 1e-13 &&
                      (!recenter || std::hypot(m.p[0], m.p[1], m.p[2]) < 1e-13) &&
                      (!fix_energy || std::abs(m.energy - 3.0) < 1e-12);
    if (done)
      break;
    if (recenter)
      for (int a = 0; a < 3; ++a)
        u[a] -= mean[a];
    if (fix_energy)
      s *= std::sqrt(3.0 / spread);
    alpha /= m.mass;
  }
  // final exact mass scaling keeps the other moments within round-off
  const double inv = 1.0 / m.mass;
  for (double &v : out.f.values)
    v *= inv;
  m = moments(out.f);

  out.center = u;
  out.scale = s;
  out.energy = m.energy;
  out.mass_residual = std::abs(m.mass - 1.0);
  out.momentum_residual = std::hypot(m.p[0], m.p[1], m.p[2]);
  out.energy_residual = fix_energy ? std::abs(m.energy - 3.0)
                                   : std::numeric_limits<double>::quiet_NaN();
  out.tail_mass = m.tail / m.mass;
  if (out.tail_mass > 1e-2)
    throw ConfigError("initial_data: domain too small, " + fmt_short(out.tail_mass) +
                      " of the mass lies outside |v| <= l/2");
  if (out.tail_mass > 1e-4)
    out.warnings.push_back("domain too small: " + fmt_short(out.tail_mass) +
                           " of the mass lies outside |v| <= l/2");
  if (fix_energy && out.energy_residual > 1e-8)
    out.warnings.push_back("energy renormalization residual " + fmt_short(out.energy_residual));

  out.barrier_k = c.k;
  double a = std::numeric_limits<double>::infinity();
  const int n = g.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double x = g.node(i), y = g.node(j), z = g.node(k);
        a = std::min(a, out.f.at(i, j, k) * japanese_pow(x * x + y * y + z * z, c.k));
      }
  out.barrier_a = a;
  return out;
}

} // namespace landau

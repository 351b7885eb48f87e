#include "landau/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "landau/format.hpp"
#include "landau/parallel.hpp"

namespace landau {

namespace {

double r2_at(const VelocityGrid &g, int i, int j, int k) {
  const double x = g.node(i), y = g.node(j), z = g.node(k);
  return x * x + y * y + z * z;
}

// Sum over nodes of body(i, j, k, q) with a deterministic slab reduction.
template <class F>
double node_sum(const VelocityGrid &g, F &&body) {
  const int n = g.n;
  return slab_sum(n, [&](int i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        acc += body(i, j, k, g.index(i, j, k));
    return acc;
  });
}

} // namespace

double entropy(const ScalarField &f) {
  const auto &g = f.grid;
  return g.cell_volume() * node_sum(g, [&](int, int, int, std::size_t q) {
           const double v = f.values[q];
           return v > 0.0 ? v * std::log(v) : 0.0;
         });
}

double fisher_information(const ScalarField &f, double f_floor) {
  const auto &g = f.grid;
  const VectorField df = gradient_fourth_order(f);
  return g.cell_volume() * node_sum(g, [&](int, int, int, std::size_t q) {
           const double v = f.values[q];
           if (!(v > f_floor))
             return 0.0; // integrand taken as 0 on {f = 0}
           const double d2 = df.c[0][q] * df.c[0][q] + df.c[1][q] * df.c[1][q] +
                             df.c[2][q] * df.c[2][q];
           return d2 / v;
         });
}

double fisher_sqrt_form(const ScalarField &f) {
  const auto &g = f.grid;
  ScalarField s(g);
  for (std::size_t q = 0; q < s.values.size(); ++q)
    s.values[q] = std::sqrt(std::max(f.values[q], 0.0));
  const VectorField ds = gradient_fourth_order(s);
  return 4.0 * g.cell_volume() * node_sum(g, [&](int, int, int, std::size_t q) {
           return ds.c[0][q] * ds.c[0][q] + ds.c[1][q] * ds.c[1][q] +
                  ds.c[2][q] * ds.c[2][q];
         });
}

DiagnosticsRecord record_field(const ScalarField &f, double t, const CoefficientSet &cs,
                               const DiagnosticsOptions &opt) {
  const auto &g = f.grid;
  const double dv = g.cell_volume();
  DiagnosticsRecord r;
  r.t = t;
  r.mass = integrate(f);
  for (int a = 0; a < 3; ++a)
    r.momentum[static_cast<std::size_t>(a)] =
        dv * node_sum(g, [&](int i, int j, int k, std::size_t q) {
          const int c = a == 0 ? i : (a == 1 ? j : k);
          return g.node(c) * f.values[q];
        });
  r.energy = dv * node_sum(g, [&](int i, int j, int k, std::size_t q) {
               return r2_at(g, i, j, k) * f.values[q];
             });
  r.entropy = entropy(f);
  r.fisher = fisher_information(f, opt.f_floor);
  r.fisher_sqrt_form = fisher_sqrt_form(f);
  r.linf = max_value(f);
  r.min_f = min_value(f);
  for (const auto &[p, m] : opt.lp_pairs)
    r.lp_norms.push_back(weighted_lp_norm(f, p, m));
  r.c0_hat = cs.c0_hat;
  r.sup_A = cs.sup_A;
  if (opt.barrier_a > 0.0) {
    double mn = std::numeric_limits<double>::infinity();
    const int n = g.n;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          mn = std::min(mn, f.at(i, j, k) * japanese_pow(r2_at(g, i, j, k), opt.barrier_k) /
                                opt.barrier_a);
    r.min_f_ratio = mn;
  } else {
    r.min_f_ratio = std::numeric_limits<double>::quiet_NaN();
  }
  r.zero_state = std::all_of(f.values.begin(), f.values.end(),
                             [](double v) { return v == 0.0; });
  const double scale = std::max(std::abs(r.fisher), std::abs(r.fisher_sqrt_form));
  r.fisher_forms_differ = scale > 0.0 && std::abs(r.fisher - r.fisher_sqrt_form) > 0.01 * scale;
  return r;
}

DiagnosticsRecord record(const SimulationState &s, const DiagnosticsOptions &opt) {
  return record_field(s.f, s.t, s.coeffs, opt);
}

std::string diagnostics_csv_header(const DiagnosticsOptions &opt) {
  std::ostringstream os;
  os << "t,mass,px,py,pz,energy,entropy,fisher,fisher_sqrt_form,linf,c0_hat,sup_A";
  for (const auto &[p, m] : opt.lp_pairs)
    os << ",lp_" << fmt_short(p) << "_m_" << fmt_short(m);
  if (opt.barrier_a > 0.0)
    os << ",min_f_ratio";
  return os.str();
}

std::string diagnostics_csv_row(const DiagnosticsRecord &r) {
  std::ostringstream os;
  os << fmt_double(r.t) << ',' << fmt_double(r.mass) << ',' << fmt_double(r.momentum[0])
     << ',' << fmt_double(r.momentum[1]) << ',' << fmt_double(r.momentum[2]) << ','
     << fmt_double(r.energy) << ',' << fmt_double(r.entropy) << ','
     << fmt_double(r.fisher) << ',' << fmt_double(r.fisher_sqrt_form) << ','
     << fmt_double(r.linf) << ',' << fmt_double(r.c0_hat) << ',' << fmt_double(r.sup_A);
  for (double v : r.lp_norms)
    os << ',' << fmt_double(v);
  if (!std::isnan(r.min_f_ratio))
    os << ',' << fmt_double(r.min_f_ratio);
  return os.str();
}

LevelSetIntegrals level_set_integrals(const ScalarField &f, double ell, double p,
                                      double m) {
  const auto &g = f.grid;
  ScalarField gp(g); // f_l^{p/2}
  bool any = false;
  for (std::size_t q = 0; q < gp.values.size(); ++q) {
    const double e = f.values[q] - ell;
    if (e > 0.0) {
      gp.values[q] = std::pow(e, 0.5 * p);
      any = true;
    }
  }
  LevelSetIntegrals out;
  if (!any)
    return out;
  const VectorField dg = gradient_fourth_order(gp);
  const double dv = g.cell_volume();
  out.a = dv * node_sum(g, [&](int i, int j, int k, std::size_t q) {
            const double v = gp.values[q];
            return v > 0.0 ? japanese_pow(r2_at(g, i, j, k), m) * v * v : 0.0;
          });
  out.b = dv * node_sum(g, [&](int i, int j, int k, std::size_t q) {
            const double d2 = dg.c[0][q] * dg.c[0][q] + dg.c[1][q] * dg.c[1][q] +
                              dg.c[2][q] * dg.c[2][q];
            return d2 == 0.0 ? 0.0 : japanese_pow(r2_at(g, i, j, k), m - 3.0) * d2;
          });
  return out;
}

LevelSetWindow level_set_energy(const Trajectory &traj, double ell, double p, double m,
                                double T1, double T2) {
  if (!(T2 >= T1))
    throw std::invalid_argument("empty window");
  LevelSetWindow w;
  w.ell = ell;
  w.p = p;
  w.m = m;
  w.T1 = T1;
  w.T2 = T2;
  const double tol = 1e-9 * std::max(1.0, std::abs(T2));
  std::vector<double> ts, bs;
  for (const auto &s : traj.snapshots) {
    if (s.t < T1 - tol || s.t > T2 + tol)
      continue;
    const auto li = level_set_integrals(s.f, ell, p, m);
    w.A = std::max(w.A, li.a);
    ts.push_back(s.t);
    bs.push_back(li.b);
  }
  if (ts.empty())
    throw std::invalid_argument("empty window: no snapshots in [T1, T2]");
  for (std::size_t i = 1; i < ts.size(); ++i)
    w.B += 0.5 * (ts[i] - ts[i - 1]) * (bs[i] + bs[i - 1]);
  w.E = w.A + w.B;
  w.samples = ts.size();
  return w;
}

double eps_regularity(const Trajectory &traj, double K, double T1, double T2) {
  return level_set_energy(traj, K, 1.5, 4.5, T1, T2).E;
}

SmoothingFit smoothing_rate_fit(const Trajectory &traj, double p, double t_lo,
                                double t_hi) {
  if (t_hi < 0.0)
    t_hi = traj.t_end();
  std::vector<double> ts, ls;
  for (const auto &s : traj.snapshots)
    if (s.t > 0.0 && s.t >= t_lo && s.t <= t_hi * (1.0 + 1e-12)) {
      ts.push_back(s.t);
      ls.push_back(max_value(s.f));
    }
  if (ts.size() < 5)
    throw std::invalid_argument("fewer than 5 usable snapshots for the rate fit");
  SmoothingFit out;
  const double e = 3.0 / (2.0 * p);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double v = std::pow(ts[i], e) * ls[i];
    if (v > out.sup_const) {
      out.sup_const = v;
      out.t_at_sup = ts[i];
    }
  }
  // the fit drops the first and last 5% of the window (by time)
  const double a = ts.front(), b = ts.back();
  const double lo = a + 0.05 * (b - a), hi = b - 0.05 * (b - a);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i] < lo || ts[i] > hi || !(ls[i] > 0.0))
      continue;
    const double x = std::log(ts[i]), y = std::log(ls[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++used;
  }
  if (used < 2)
    throw std::invalid_argument("fewer than 2 snapshots inside the trimmed fit window");
  const double N = static_cast<double>(used);
  const double den = N * sxx - sx * sx;
  out.slope = den > 0.0 ? (N * sxy - sx * sy) / den : 0.0;
  out.used = used;
  return out;
}

InequalityReport moment_growth_check(const Trajectory &traj, double k) {
  if (!(k > 2.0))
    throw std::invalid_argument("moment order k must exceed 2");
  InequalityReport r;
  r.name = "moment_growth_k" + fmt_short(k);
  for (const auto &s : traj.snapshots) {
    const auto w = weight_field(s.f.grid, k);
    const double mk = integrate_product(w, s.f);
    r.add("t=" + fmt_double(s.t), mk / (1.0 + s.t));
  }
  finalize_bounds(r);
  return r;
}

ScalarField maxwellian(const VelocityGrid &g) {
  ScalarField mu(g);
  const double c = std::pow(2.0 * std::numbers::pi, -1.5);
  const int n = g.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        mu.at(i, j, k) = c * std::exp(-0.5 * r2_at(g, i, j, k));
  return mu;
}

EquilibriumDistance equilibrium_distance(const ScalarField &f, double m, double tol) {
  const auto &g = f.grid;
  const double dv = g.cell_volume();
  const double mass = integrate(f);
  const double energy = dv * node_sum(g, [&](int i, int j, int k, std::size_t q) {
                          return r2_at(g, i, j, k) * f.values[q];
                        });
  double pmax = 0.0;
  for (int a = 0; a < 3; ++a) {
    const double pa = dv * node_sum(g, [&](int i, int j, int k, std::size_t q) {
                        const int c = a == 0 ? i : (a == 1 ? j : k);
                        return g.node(c) * f.values[q];
                      });
    pmax = std::max(pmax, std::abs(pa));
  }
  if (std::abs(mass - 1.0) > tol || pmax > tol || std::abs(energy - 3.0) > 3.0 * tol)
    throw std::invalid_argument("state violates the normalization: mass " +
                                fmt_short(mass) + ", energy " + fmt_short(energy));
  const ScalarField mu = maxwellian(g);
  EquilibriumDistance d;
  d.L1 = dv * node_sum(g, [&](int, int, int, std::size_t q) {
           return std::abs(f.values[q] - mu.values[q]);
         });
  d.L2_m = std::sqrt(dv * node_sum(g, [&](int i, int j, int k, std::size_t q) {
                       const double e = f.values[q] - mu.values[q];
                       return japanese_pow(r2_at(g, i, j, k), m) * e * e;
                     }));
  for (std::size_t q = 0; q < f.values.size(); ++q)
    d.Linf = std::max(d.Linf, std::abs(f.values[q] - mu.values[q]));
  return d;
}

} // namespace landau

#include "landau/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "landau/errors.hpp"
#include "landau/format.hpp"
#include "landau/parallel.hpp"

namespace landau {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t splitmix(std::uint64_t &x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double r2_at(const VelocityGrid &g, int i, int j, int k) {
  const double x = g.node(i), y = g.node(j), z = g.node(k);
  return x * x + y * y + z * z;
}

// h^3 sum of w(r2) * value(q) with a deterministic reduction.
template <class W, class V>
double weighted_sum(const VelocityGrid &g, W &&w, V &&value) {
  const int n = g.n;
  return g.cell_volume() * slab_sum(n, [&](int i) {
           double acc = 0.0;
           for (int j = 0; j < n; ++j)
             for (int k = 0; k < n; ++k) {
               const double v = value(g.index(i, j, k));
               if (v != 0.0)
                 acc += w(r2_at(g, i, j, k)) * v;
             }
           return acc;
         });
}

double grad_sq(const VectorField &d, std::size_t q) {
  return d.c[0][q] * d.c[0][q] + d.c[1][q] * d.c[1][q] + d.c[2][q] * d.c[2][q];
}

double ratio_or_nan(double lhs, double rhs) {
  if (lhs == 0.0 && rhs == 0.0)
    return kNaN;
  return lhs / rhs;
}

ScalarField scaled(const ScalarField &f, double c) {
  ScalarField out = f;
  for (double &v : out.values)
    v *= c;
  return out;
}

constexpr double kAuditScale = 3.7;

void audit(InequalityReport &r, double base, double rescaled) {
  if (std::isnan(base) || std::isnan(rescaled) || base == 0.0)
    return;
  r.homogeneity_deviation =
      std::max(r.homogeneity_deviation, std::abs(rescaled - base) / std::abs(base));
}

} // namespace

Random::Random(std::uint64_t seed) {
  std::uint64_t x = seed;
  state_[0] = splitmix(x);
  state_[1] = splitmix(x);
}

std::uint64_t Random::next() {
  // xoroshiro128+
  const std::uint64_t s0 = state_[0];
  std::uint64_t s1 = state_[1];
  const std::uint64_t result = s0 + s1;
  s1 ^= s0;
  state_[0] = ((s0 << 24) | (s0 >> 40)) ^ s1 ^ (s1 << 16);
  state_[1] = (s1 << 37) | (s1 >> 27);
  return result;
}

double Random::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::vector<CorpusSample> make_corpus(const VelocityGrid &g, std::uint64_t seed,
                                      int size) {
  Random rng(seed);
  std::vector<CorpusSample> out;
  const int n = g.n;
  for (int s = 0; s < size; ++s) {
    const int family = (s / 2) % 3;
    CorpusSample cs;
    cs.f = ScalarField(g);
    if (family == 0) {
      const double c[3] = {rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5),
                           rng.uniform(-1.5, 1.5)};
      const double sig = rng.uniform(0.7, 1.6);
      const double amp = rng.uniform(0.5, 2.0);
      cs.label = "gaussian";
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            const double dx = g.node(i) - c[0], dy = g.node(j) - c[1], dz = g.node(k) - c[2];
            cs.f.at(i, j, k) = amp * std::exp(-(dx * dx + dy * dy + dz * dz) / (2 * sig * sig));
          }
    } else if (family == 1) {
      const int comps = 2 + static_cast<int>(rng.uniform() * 2.0);
      cs.label = "mixture" + std::to_string(comps);
      for (int m = 0; m < comps; ++m) {
        const double c[3] = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0),
                             rng.uniform(-2.0, 2.0)};
        const double sig = rng.uniform(0.6, 1.3);
        const double w = rng.uniform(0.3, 1.0);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
              const double dx = g.node(i) - c[0], dy = g.node(j) - c[1],
                           dz = g.node(k) - c[2];
              cs.f.at(i, j, k) += w * std::exp(-(dx * dx + dy * dy + dz * dz) / (2 * sig * sig));
            }
      }
    } else {
      const double c[3] = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                           rng.uniform(-1.0, 1.0)};
      const double kk = rng.uniform(8.0, 12.0);
      const double sc = rng.uniform(0.8, 1.5);
      cs.label = "polytail_k" + fmt_short(std::round(kk * 100) / 100);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            const double dx = (g.node(i) - c[0]) / sc, dy = (g.node(j) - c[1]) / sc,
                         dz = (g.node(k) - c[2]) / sc;
            cs.f.at(i, j, k) = japanese_pow(dx * dx + dy * dy + dz * dz, -kk);
          }
    }
    out.push_back(std::move(cs));
  }
  return out;
}

double sobolev_constant() {
  return 1.0 / (3.0 * std::pow(std::numbers::pi / 2.0, 4.0 / 3.0));
}

namespace {

double sobolev_ratio(const ScalarField &f, double k) {
  const auto &g = f.grid;
  const VectorField df = gradient_fourth_order(f);
  const double six = weighted_sum(
      g, [&](double r2) { return japanese_pow(r2, 3 * k - 9); },
      [&](std::size_t q) { return std::pow(f.values[q], 6); });
  const double two = weighted_sum(
      g, [&](double r2) { return japanese_pow(r2, k - 5); },
      [&](std::size_t q) { return f.values[q] * f.values[q]; });
  const double rhs = weighted_sum(
      g, [&](double r2) { return japanese_pow(r2, k - 3); },
      [&](std::size_t q) { return grad_sq(df, q); });
  const double c1 = (k - 3.0) * (k - 1.0) / 4.0;
  return ratio_or_nan(std::cbrt(six) + sobolev_constant() * c1 * two, rhs);
}

double interpolation_ratio(const ScalarField &f, double p, double q, double k, double m) {
  const auto &g = f.grid;
  ScalarField fp(g);
  for (std::size_t i = 0; i < fp.values.size(); ++i)
    fp.values[i] = f.values[i] > 0.0 ? std::pow(f.values[i], 0.5 * p) : 0.0;
  const VectorField d = gradient_fourth_order(fp);
  const double num = weighted_sum(
      g, [&](double r2) { return japanese_pow(r2, k); },
      [&](std::size_t i) { return f.values[i] > 0.0 ? std::pow(f.values[i], q) : 0.0; });
  const double mp = weighted_sum(
      g, [&](double r2) { return japanese_pow(r2, m); },
      [&](std::size_t i) { return fp.values[i] * fp.values[i]; });
  const double gr = weighted_sum(
      g, [&](double r2) { return japanese_pow(r2, k - 3); },
      [&](std::size_t i) { return grad_sq(d, i); });
  const double den = std::pow(mp, (3 * p - q) / (2 * p)) * std::pow(gr, 3 * (q - p) / (2 * p));
  return ratio_or_nan(num, den);
}

} // namespace

InequalityReport check_weighted_sobolev(const std::vector<CorpusSample> &corpus,
                                        double k, std::uint64_t seed) {
  if (!(k >= 3.0))
    throw std::invalid_argument("weighted Sobolev check needs k >= 3");
  InequalityReport r;
  r.name = "weighted_sobolev_k" + fmt_short(k);
  r.seed = seed;
  for (const auto &s : corpus) {
    const double base = sobolev_ratio(s.f, k);
    r.add(s.label, base);
    audit(r, base, sobolev_ratio(scaled(s.f, kAuditScale), k));
  }
  finalize_corpus(r);
  r.extra["sobolev_constant"] = sobolev_constant();
  r.extra["C1_appendix_over_sobolev_constant"] = (k - 3.0) * (k - 1.0) / 4.0;
  r.extra["max_ratio_over_sobolev_constant"] = r.max_ratio / sobolev_constant();
  return r;
}

double interpolation_weight(double p, double q, double k) {
  if (!(1.0 < p && p < q && q < 3.0 * p))
    throw std::invalid_argument("interpolation needs 1 < p < q < 3p");
  return (2.0 * k * p - (k - 3.0) * (3.0 * q - 3.0 * p)) / (3.0 * p - q);
}

InequalityReport check_interpolation(const std::vector<CorpusSample> &corpus, double p,
                                     double q, double k, std::uint64_t seed) {
  const double m = interpolation_weight(p, q, k);
  InequalityReport r;
  r.name = "interpolation_p" + fmt_short(p) + "_q" + fmt_short(q) + "_k" + fmt_short(k);
  r.seed = seed;
  for (const auto &s : corpus) {
    const double base = interpolation_ratio(s.f, p, q, k, m);
    r.add(s.label, base);
    audit(r, base, interpolation_ratio(scaled(s.f, kAuditScale), p, q, k, m));
  }
  finalize_corpus(r);
  r.extra["m"] = m;
  return r;
}

std::vector<PoincarePair> make_poincare_pairs(const std::vector<CorpusSample> &corpus,
                                              std::uint64_t seed) {
  Random rng(seed ^ 0x5bd1e995ULL);
  std::vector<PoincarePair> out;
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    PoincarePair pp;
    pp.g = corpus[s].f;
    // every other pair of samples keeps phi = 1, the rest use a random cutoff
    if ((s / 2) % 2 == 0) {
      pp.phi = ScalarField(pp.g.grid, 1.0);
      pp.label = corpus[s].label + "/phi1";
      rng.uniform();
      rng.uniform();
    } else {
      const double R = rng.uniform(1.5, 4.0);
      const double c0 = rng.uniform(-1.0, 1.0);
      const double center[3] = {c0, -0.5 * c0, 0.25 * c0};
      pp.phi = cutoff_field(pp.g.grid, R, center);
      pp.label = corpus[s].label + "/cutoffR" + fmt_short(std::round(R * 100) / 100);
    }
    out.push_back(std::move(pp));
  }
  return out;
}

PoincareTerms poincare_terms(const ScalarField &g, const ScalarField &phi, double p,
                             double q) {
  const auto &grid = g.grid;
  ScalarField u(grid); // phi g^{p/2}
  for (std::size_t i = 0; i < u.values.size(); ++i)
    u.values[i] = g.values[i] > 0.0 ? phi.values[i] * std::pow(g.values[i], 0.5 * p) : 0.0;
  const VectorField du = gradient_fourth_order(u);
  PoincareTerms t;
  auto gp = [&](std::size_t i, double e) {
    return g.values[i] > 0.0 ? std::pow(g.values[i], e) : 0.0;
  };
  t.lhs = weighted_sum(
      grid, [](double r2) { return japanese_pow(r2, 4.5); },
      [&](std::size_t i) { return phi.values[i] * phi.values[i] * gp(i, p + 1); });
  t.grad = weighted_sum(
      grid, [](double r2) { return japanese_pow(r2, 1.5); },
      [&](std::size_t i) { return grad_sq(du, i); });
  const double lq = weighted_sum(
      grid, [](double r2) { return japanese_pow(r2, 4.5); },
      [&](std::size_t i) { return gp(i, q); });
  // (|g|_{L^q_{9/2}}^{2q})^{1/(2q-3)} = (int <v>^{9/2} g^q)^{2/(2q-3)}
  t.norm = std::pow(lq, 2.0 / (2.0 * q - 3.0));
  t.mass = weighted_sum(
      grid, [](double r2) { return japanese_pow(r2, 4.5); },
      [&](std::size_t i) { return phi.values[i] * phi.values[i] * gp(i, p); });
  return t;
}

InequalityReport check_eps_poincare(const std::vector<PoincarePair> &pairs, double p,
                                    double q, const std::vector<double> &eps_grid,
                                    std::uint64_t seed) {
  if (!(q > 1.5))
    throw std::invalid_argument("eps-Poincare check needs q > 3/2");
  for (double e : eps_grid)
    if (!(e > 0.0))
      throw std::invalid_argument("eps grid must be positive");
  const double beta = 3.0 / (2.0 * q - 3.0);
  InequalityReport r;
  r.name = "eps_poincare_p" + fmt_short(p) + "_q" + fmt_short(q);
  r.seed = seed;

  std::vector<PoincareTerms> terms, terms_scaled;
  for (const auto &pp : pairs) {
    terms.push_back(poincare_terms(pp.g, pp.phi, p, q));
    terms_scaled.push_back(poincare_terms(scaled(pp.g, kAuditScale), pp.phi, p, q));
  }
  auto ratio = [&](const PoincareTerms &t, double eps) {
    return ratio_or_nan(t.lhs, eps * t.grad + std::pow(eps, -beta) * t.norm * t.mass);
  };
  for (double eps : eps_grid)
    for (std::size_t s = 0; s < pairs.size(); ++s) {
      const double base = ratio(terms[s], eps);
      r.add(pairs[s].label + "@eps=" + fmt_short(eps), base);
      // (g, eps) -> (c g, c eps) leaves the ratio invariant
      audit(r, base, ratio(terms_scaled[s], kAuditScale * eps));
    }
  finalize_corpus(r);

  // Smallest admissible second-term constant S(eps) = sup (LHS - eps G)_+ / (N M)
  // over the pairs and an amplitude ladder c g, c in [1e-3, 1e3].
  std::vector<double> xs, ys;
  for (double eps : eps_grid) {
    double S = 0.0;
    for (const auto &t : terms) {
      if (!(t.norm > 0.0 && t.mass > 0.0))
        continue;
      for (int e = -150; e <= 150; ++e) {
        const double c = std::pow(10.0, e / 50.0);
        // LHS ~ c^{p+1}, G ~ c^p, N ~ c^{1+beta}, M ~ c^p
        const double num = c * t.lhs - eps * t.grad;
        if (num > 0.0)
          S = std::max(S, num / (std::pow(c, 1.0 + beta) * t.norm * t.mass));
      }
    }
    if (S > 0.0) {
      xs.push_back(std::log(eps));
      ys.push_back(std::log(S));
      r.extra["second_term_constant@eps=" + fmt_short(eps)] = S;
    }
  }
  double slope = kNaN;
  if (xs.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    const double N = static_cast<double>(xs.size());
    slope = (N * sxy - sx * sy) / (N * sxx - sx * sx);
  }
  r.extra["eps_slope"] = slope;
  r.extra["eps_slope_predicted"] = -beta;
  const bool slope_ok = std::isfinite(slope) && std::abs(slope + beta) <= 0.1;
  if (!slope_ok)
    r.notes.push_back("eps exponent of the second term deviates from -3/(2q-3)");
  r.pass = r.pass && slope_ok;
  return r;
}

namespace {

// s(u) = t(2-u) / (t(2-u) + t(u-1)) and 1 - s(u), evaluated without cancellation.
void cutoff_parts(double u, double &s, double &one_minus_s) {
  if (u <= 1.0) {
    s = 1.0;
    one_minus_s = 0.0;
    return;
  }
  if (u >= 2.0) {
    s = 0.0;
    one_minus_s = 1.0;
    return;
  }
  const double a = 2.0 - u, b = u - 1.0;
  const double d = 1.0 / a - 1.0 / b; // s = 1 / (1 + e^d)
  if (d > 700.0) {
    s = std::exp(-d);
    one_minus_s = 1.0;
  } else if (d < -700.0) {
    s = 1.0;
    one_minus_s = std::exp(d);
  } else {
    s = 1.0 / (1.0 + std::exp(d));
    one_minus_s = 1.0 / (1.0 + std::exp(-d));
  }
}

} // namespace

double cutoff_profile(double x, double R) {
  double s, oms;
  cutoff_parts(x / R, s, oms);
  return s * s;
}

double cutoff_profile_derivative(double x, double R) {
  const double u = x / R;
  if (u <= 1.0 || u >= 2.0)
    return 0.0;
  double s, oms;
  cutoff_parts(u, s, oms);
  const double a = 2.0 - u, b = u - 1.0;
  return -2.0 * s * s * oms * (1.0 / (a * a) + 1.0 / (b * b)) / R;
}

ScalarField cutoff_field(const VelocityGrid &g, double R, const double center[3]) {
  ScalarField out(g);
  const int n = g.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double dx = g.node(i) - center[0], dy = g.node(j) - center[1],
                     dz = g.node(k) - center[2];
        out.at(i, j, k) = cutoff_profile(std::sqrt(dx * dx + dy * dy + dz * dz), R);
      }
  return out;
}

CutoffProfile build_cutoff(double R, int mesh) {
  if (!(R > 0.0))
    throw std::invalid_argument("cutoff radius must be positive");
  if (mesh < 10001)
    throw std::invalid_argument("cutoff mesh needs at least 1e4 points");
  CutoffProfile c;
  c.R = R;
  for (int i = 0; i < mesh; ++i) {
    const double u = 1.0 + static_cast<double>(i) / (mesh - 1);
    const double x = R * u;
    double s, oms;
    cutoff_parts(u, s, oms);
    const double eta = s * s;
    const double one_minus = oms * (1.0 + s);
    const double g = std::abs(cutoff_profile_derivative(x, R));
    c.x.push_back(x);
    c.eta.push_back(eta);
    c.one_minus_eta.push_back(one_minus);
    c.grad.push_back(g);
    if (g == 0.0)
      continue;
    const double rs = std::sqrt(eta), rm = std::sqrt(one_minus);
    c.C_sqrt_eta = std::max(c.C_sqrt_eta, R * g / rs);
    c.C_sqrt_one_minus = std::max(c.C_sqrt_one_minus, R * g / rm);
    c.C_hat = std::max(c.C_hat, R * g / std::min(rs, rm));
    c.C_loose = std::max(c.C_loose, R * g / std::max(rs, rm));
  }
  return c;
}

CutoffCheck verify_cutoff(const CutoffProfile &c) {
  CutoffCheck out;
  const double R = c.R;
  out.range = std::all_of(c.eta.begin(), c.eta.end(),
                          [](double e) { return e >= 0.0 && e <= 1.0; });
  // support: probe inside B_R and outside B_2R
  bool sup = true;
  for (int i = 0; i <= 100; ++i) {
    sup = sup && cutoff_profile(R * i / 100.0, R) == 1.0;
    sup = sup && cutoff_profile(R * (2.0 + i / 50.0), R) == 0.0;
  }
  for (std::size_t i = 1; i < c.eta.size(); ++i)
    sup = sup && c.eta[i] <= c.eta[i - 1];
  out.support = sup;
  bool b1 = true, b2 = true;
  for (std::size_t i = 0; i < c.x.size(); ++i) {
    const double e = c.eta[i];
    const double slack = 1.0 + 1e-12;
    b1 = b1 && c.grad[i] <= slack * c.C_hat * std::sqrt(e) / R;
    b2 = b2 && c.grad[i] <= slack * c.C_hat * std::sqrt(c.one_minus_eta[i]) / R;
  }
  out.bound_sqrt_eta = b1;
  out.bound_sqrt_one_minus = b2;
  double mx = 0.0;
  for (std::size_t i = 1; i + 1 < c.x.size(); ++i) {
    const double dx = c.x[i + 1] - c.x[i];
    mx = std::max(mx, std::abs(c.eta[i + 1] - 2.0 * c.eta[i] + c.eta[i - 1]) / (dx * dx));
  }
  out.max_second_difference = mx * R * R;
  out.smooth = std::isfinite(out.max_second_difference) && out.max_second_difference < 1e3;
  return out;
}

double critical_barrier_constant(double n, double k) {
  if (!(n < -3.0))
    throw std::invalid_argument("barrier weight n must be below -3");
  return 2.0 * (n + k) * (n + k) + 3.0 * k - 2.0 * n;
}

double critical_sufficient_rate(double n, double k, double M) {
  if (!(k > 0.0) || !(M >= 0.0))
    throw std::invalid_argument("critical barrier needs k > 0 and M >= 0");
  return 1.5 * critical_barrier_constant(n, k) * M;
}

SubcriticalRate subcritical_sufficient_rate(double k, double trace_bound,
                                            double ellipticity_floor) {
  if (!(k > 5.0))
    throw HypothesisError("hypothesis: k > 5 required");
  if (!(trace_bound > 0.0) || !(ellipticity_floor > 0.0))
    throw std::invalid_argument("coefficient bounds must be positive");
  SubcriticalRate s;
  s.C1_tilde = k * trace_bound;
  s.C2_tilde = k * (k + 2.0) * ellipticity_floor;
  s.delta = s.C2_tilde / s.C1_tilde;
  s.eta_young = s.C1_tilde * std::pow(5.0 / (2.0 * s.delta), 10.0 / 3.0);
  // at v = 0 the dissipative term vanishes and the bracket equals C1_tilde - eta
  s.eta = std::max(s.eta_young, s.C1_tilde);
  return s;
}

double measured_critical_M(const Trajectory &traj) {
  double M = 0.0;
  for (const auto &s : traj.snapshots)
    if (s.t > 0.0)
      M = std::max(M, std::cbrt(s.t) * s.sup_A);
  return M;
}

double barrier_time_factor(const BarrierParams &b, double t) {
  return b.regime == BarrierRegime::Critical ? std::exp(-b.eta * std::pow(t, 2.0 / 3.0))
                                             : std::exp(-b.eta * t);
}

double barrier_residual(const ScalarField &f, const CoefficientSet &cs,
                        const BarrierParams &b, double t) {
  const auto &g = f.grid;
  const double dt_log = b.regime == BarrierRegime::Critical
                            ? -(2.0 / 3.0) * b.eta * std::pow(t, -1.0 / 3.0)
                            : -b.eta;
  const int n = g.n;
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const std::size_t q = g.index(i, j, k);
        const double v[3] = {g.node(i), g.node(j), g.node(k)};
        const double br2 = 1.0 + v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        double vAv = 0.0;
        for (int r = 0; r < 3; ++r)
          for (int s = 0; s < 3; ++s)
            vAv += v[r] * cs.A.entry(q, r, s) * v[s];
        const double trA = cs.A.c[XX][q] + cs.A.c[YY][q] + cs.A.c[ZZ][q];
        // D^2 <v>^{-k} / <v>^{-k} = k(k+2) v v^T / <v>^4 - k I / <v>^2
        const double hess = b.k * (b.k + 2.0) * vAv / (br2 * br2) - b.k * trA / br2;
        worst = std::max(worst, dt_log - hess - f.values[q]);
      }
  return worst;
}

MonitorSeries minimum_principle_monitor(const Trajectory &traj, const BarrierParams &b) {
  if (!(b.n_weight < -3.0))
    throw std::invalid_argument("monitor weight n must be below -3");
  MonitorSeries out;
  const auto &g = traj.grid;
  out.tolerance = 1e-8 + g.h * g.h;
  const int n = g.n;
  for (const auto &s : traj.snapshots) {
    const double barrier = b.a * barrier_time_factor(b, s.t);
    double mr = std::numeric_limits<double>::infinity();
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const double r2 = r2_at(g, i, j, k);
          const double fk = s.f.at(i, j, k) * japanese_pow(r2, b.k);
          mr = std::min(mr, fk / barrier);
          const double gap = barrier - fk;
          if (gap > 0.0)
            acc += japanese_pow(r2, b.n_weight) * gap * std::sqrt(gap);
        }
    out.t.push_back(s.t);
    out.integral.push_back(acc * g.cell_volume());
    out.min_ratio.push_back(mr);
  }
  out.nonincreasing = true;
  for (std::size_t i = 1; i < out.integral.size(); ++i) {
    const double inc = out.integral[i] - out.integral[i - 1];
    out.max_increase = std::max(out.max_increase, inc);
    if (inc > out.tolerance)
      out.nonincreasing = false;
  }
  out.invalid_hypothesis = !out.integral.empty() && out.t.front() == 0.0 &&
                           out.integral.front() > 0.0;
  return out;
}

} // namespace landau

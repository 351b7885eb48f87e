#include "landau/degiorgi.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "landau/diagnostics.hpp"
#include "landau/errors.hpp"
#include "landau/format.hpp"

namespace landau {

namespace {

constexpr double kTimeTol = 1e-9;

double default_p(LadderRegime r, double p) {
  if (p > 0.0)
    return p;
  return r == LadderRegime::Critical ? 1.5 : 2.0;
}

double kappa_of(double p) { return 2.0 * p / 3.0 + 1.0; }

double subcritical_B(double p) { return std::pow(2.0, 1.5 * kappa_of(p)); }

} // namespace

IterationLadder measure_ladder(const Trajectory &traj, LadderRegime regime, double K,
                               double amplitude, double t, double T, int levels, double p,
                               double m) {
  if (levels < 1 || levels > 12)
    throw std::invalid_argument("ladder needs 1 <= N_levels <= 12");
  if (!(amplitude > 0.0) || !(K >= 0.0))
    throw std::invalid_argument("ladder needs K >= 0 and a positive amplitude");
  if (!(t > 0.0) || !(t < T))
    throw std::invalid_argument("ladder needs 0 < t < T");
  if (traj.snapshots.empty() || T > traj.t_end() + kTimeTol)
    throw std::invalid_argument("window uncovered: trajectory ends before T");
  IterationLadder L;
  L.regime = regime;
  L.K = K;
  L.amplitude = amplitude;
  L.t = t;
  L.T = T;
  L.p = default_p(regime, p);
  L.m = m;
  if (regime == LadderRegime::Subcritical && !(L.p > 1.5))
    throw std::invalid_argument("subcritical ladder needs p > 3/2");
  for (int n = 0; n <= levels; ++n) {
    const double frac = 1.0 - std::ldexp(1.0, -n);
    const double ell = K + frac * amplitude;
    const double tn = t * frac;
    const LevelSetWindow w = level_set_energy(traj, ell, L.p, m, tn, T);
    L.ell.push_back(ell);
    L.times.push_back(tn);
    L.A.push_back(w.A);
    L.B.push_back(w.B);
    L.E.push_back(regime == LadderRegime::Critical
                      ? w.E
                      : std::pow(w.A, 0.4) * std::pow(w.B, 0.6));
  }
  const double E0 = L.E.front();
  const double base =
      regime == LadderRegime::Critical ? 8.0 : subcritical_B(L.p);
  for (int n = 0; n <= levels; ++n)
    L.barrier.push_back(std::pow(base, -n) * E0);
  L.floor = 1e-13 * E0;
  return L;
}

double ladder_decay_ratio(const IterationLadder &L, int n_max) {
  double rho = 0.0;
  for (std::size_t n = 0; n + 1 < L.E.size() && static_cast<int>(n) < n_max; ++n)
    if (L.E[n] > 10.0 * L.floor)
      rho = std::max(rho, L.E[n + 1] / L.E[n]);
  return rho;
}

RecurrenceFit fit_recurrence(const IterationLadder &L, double time_unit) {
  if (!(time_unit > 0.0))
    throw std::invalid_argument("time unit must be positive");
  RecurrenceFit fit;
  fit.regime = L.regime;
  fit.E0 = L.E.empty() ? 0.0 : L.E.front();
  fit.kappa = L.regime == LadderRegime::Critical ? 2.0 : kappa_of(L.p);
  if (std::all_of(L.E.begin(), L.E.end(), [](double e) { return e == 0.0; })) {
    fit.vacuous = true;
    fit.verdict = "vacuous";
    fit.barrier_closes = true;
    return fit;
  }
  std::vector<std::size_t> used;
  for (std::size_t n = 0; n + 1 < L.E.size(); ++n)
    if (L.E[n] > 10.0 * L.floor)
      used.push_back(n);
  std::size_t alive = 0;
  for (double e : L.E)
    alive += e > 10.0 * L.floor;
  if (alive < 4)
    throw NumericError("degenerate ladder: fewer than 4 levels above the quadrature floor");
  fit.used_levels = used.size();

  const double p = L.p;
  const double E0 = fit.E0;
  const double tt = L.t / time_unit;
  const double amp = L.amplitude;
  const double K = L.K;
  if (L.regime == LadderRegime::Critical) {
    fit.X = 1.0 + 1.0 / (amp * tt) + std::sqrt(E0) / std::pow(amp, 0.75) + (1.0 + K) / amp +
            K * K / (amp * amp);
  } else {
    const double e = 2.0 * p / 3.0;
    fit.X = 1.0 / (std::pow(amp, e) * tt) + 1.0 / std::pow(amp, e) +
            1.0 / std::pow(amp, (2.0 * p - 3.0) / 3.0);
  }

  std::vector<double> lemma_factor(L.E.size(), 0.0), iter_factor(L.E.size(), 0.0);
  for (std::size_t n : used) {
    const double dl = L.ell[n + 1] - L.ell[n];
    const double dt = (L.times[n + 1] - L.times[n]) / time_unit;
    const double ell = L.ell[n + 1];
    double bracket;
    if (L.regime == LadderRegime::Critical) {
      bracket = 1.0 + std::sqrt(L.A[n]) / std::pow(dl, 0.75) + 1.0 / (dt * dl) +
                (1.0 + ell) / dl + ell * ell / (dl * dl);
    } else {
      const double e = 2.0 * p / 3.0;
      bracket = 1.0 / (std::pow(dl, e) * dt) + 1.0 / std::pow(dl, e - 1.0) +
                (1.0 + ell) / std::pow(dl, e) + ell * ell / std::pow(dl, e + 1.0);
    }
    lemma_factor[n] = bracket * std::pow(L.A[n], 2.0 / 3.0) * L.B[n];
    iter_factor[n] = std::pow(2.0, fit.kappa * static_cast<double>(n)) * fit.X *
                     std::pow(L.E[n], 5.0 / 3.0);
    if (lemma_factor[n] > 0.0)
      fit.C_lemma = std::max(fit.C_lemma, L.E[n + 1] / lemma_factor[n]);
    fit.C_hat = std::max(fit.C_hat, L.E[n + 1] / iter_factor[n]);
  }
  for (std::size_t n : used) {
    fit.slack.push_back(1.0 - L.E[n + 1] / (fit.C_hat * iter_factor[n]));
    fit.slack_lemma.push_back(lemma_factor[n] > 0.0 && fit.C_lemma > 0.0
                                  ? 1.0 - L.E[n + 1] / (fit.C_lemma * lemma_factor[n])
                                  : 1.0);
  }

  // Barrier induction with the fitted constant; the level factor cancels against
  // B^{-2n/3} so a single inequality decides it.
  double lhs_over_barrier;
  if (L.regime == LadderRegime::Critical) {
    fit.C1 = 1.0;
    fit.C2 = std::max(1.0, fit.C_hat);
    fit.eps0 = std::min(1.0, 1.0 / (64.0 * std::pow(fit.C1 + fit.C2, 1.5)));
    fit.eps0_as_printed = std::max(1.0, 1.0 / (64.0 * std::pow(fit.C1 + fit.C2, 1.5)));
    fit.C_star = 1.0 + std::max({64.0 * fit.C2, 256.0 * std::pow(fit.C2, 4.0 / 3.0),
                                 8.0 * std::sqrt(fit.C2)});
    fit.barrier_B = 8.0;
    lhs_over_barrier = 8.0 * fit.C_hat * fit.X * std::pow(E0, 2.0 / 3.0);
  } else {
    fit.C_star = std::max(1.0, fit.C_hat);
    fit.barrier_B = subcritical_B(p);
    lhs_over_barrier = fit.C_hat * fit.X * fit.barrier_B * std::pow(E0, 2.0 / 3.0);
  }
  fit.barrier_closes = lhs_over_barrier <= 1.0 + 1e-12;
  fit.verdict = fit.barrier_closes ? "certified" : "fitted, barrier open";
  return fit;
}

LinfPrediction predict_linf_bound(const RecurrenceFit &fit, double E0, double K, double t,
                                  double p) {
  LinfPrediction out;
  if (!(t > 0.0) || !(E0 >= 0.0))
    throw std::invalid_argument("prediction needs t > 0 and E0 >= 0");
  if (fit.regime == LadderRegime::Critical) {
    const double C2 = fit.C2;
    const double e23 = std::pow(E0, 2.0 / 3.0);
    const double eta =
        std::max({64.0 * C2, 256.0 * std::pow(C2, 4.0 / 3.0), 8.0 * std::sqrt(C2)}) *
        std::max({e23 / t, std::pow(E0, 14.0 / 9.0), e23 * (1.0 + K),
                  std::cbrt(E0) * K});
    out.level = K + eta;
    out.bound = fit.C_star * (K + 1.0) + fit.C_star * e23 / t;
    out.hypothesis_ok = E0 <= fit.eps0;
  } else {
    if (!(p > 1.5))
      throw std::invalid_argument("subcritical prediction needs p > 3/2");
    const double B = subcritical_B(p);
    const double base = 3.0 * std::max(1.0, fit.C_star) * B;
    const double Ct = std::max(std::pow(base, 1.5 / p), std::pow(base, 3.0 / (2.0 * p - 3.0)));
    const double e1p = std::pow(E0, 1.0 / p);
    const double tail = std::pow(E0, 2.0 / (2.0 * p - 3.0));
    const double ts = std::pow(t, -1.5 / p);
    out.level = Ct * std::max({e1p * ts, e1p, tail});
    out.bound = Ct * std::max(e1p * (1.0 + ts), tail);
    out.hypothesis_ok = true;
  }
  return out;
}

double measured_linf(const Trajectory &traj, double t, double T) {
  double mx = 0.0;
  for (const auto &s : traj.snapshots)
    if (s.t >= t - kTimeTol && s.t <= T + kTimeTol)
      mx = std::max(mx, max_value(s.f));
  return mx;
}

double beta1(double m) {
  if (!(m > 2.0))
    throw std::invalid_argument("beta_1 needs m > 2");
  const double q = std::min(4.0 / 3.0, m / (m - 2.0));
  return (3.0 - 2.0 * q) / (q - 1.0);
}

PropagationSeries propagation_ode_monitor(const Trajectory &traj, double K, double m,
                                          int max_cadence) {
  if (!(K > 0.0))
    throw std::invalid_argument("propagation monitor needs K > 0");
  const auto &snaps = traj.snapshots;
  if (snaps.size() < 3)
    throw std::invalid_argument("cadence too coarse: fewer than 3 snapshots");
  for (std::size_t i = 1; i < snaps.size(); ++i)
    if (snaps[i].step - snaps[i - 1].step > static_cast<long>(max_cadence))
      throw std::invalid_argument("cadence too coarse: more than " +
                                  std::to_string(max_cadence) + " steps between snapshots");
  PropagationSeries s;
  s.K = K;
  s.m = m;
  for (const auto &snap : snaps) {
    const LevelSetIntegrals top = level_set_integrals(snap.f, K, 1.5, m);
    ScalarField g = snap.f;
    for (double &v : g.values)
      v = std::min(v, 2.0 * K);
    const LevelSetIntegrals bulk = level_set_integrals(g, 0.0, 1.5, m);
    s.t.push_back(snap.t);
    s.y.push_back(top.a);
    s.F.push_back(top.b);
    s.z.push_back(bulk.a);
    s.G.push_back(bulk.b);
  }
  const std::size_t N = s.t.size();
  for (std::size_t i = 0; i < N; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == N ? N - 1 : i + 1;
    s.dydt.push_back((s.y[hi] - s.y[lo]) / (s.t[hi] - s.t[lo]));
    s.rhs.push_back(s.F[i] * std::pow(s.y[i], 2.0 / 3.0) + (1.0 + K) * s.y[i] +
                    std::pow(s.y[i], 1.4) + K * s.z[i]);
  }
  s.delta = s.y.front();
  s.beta = std::max(beta1(m), 7.0 / 3.0);
  if (std::all_of(s.y.begin(), s.y.end(), [](double v) { return v == 0.0; })) {
    s.vacuous = true;
    s.verdict = true;
    s.fraction_ok = 1.0;
    s.T_pred = 1.0;
    s.small = true;
    return s;
  }
  const std::size_t half = std::max<std::size_t>(2, N / 2);
  for (std::size_t i = 0; i < half; ++i)
    if (s.rhs[i] > 0.0)
      s.C = std::max(s.C, (s.dydt[i] + s.F[i]) / s.rhs[i]);
  std::size_t ok = 0;
  for (std::size_t i = 0; i < N; ++i) {
    const double lhs = s.dydt[i] + s.F[i];
    ok += lhs <= s.C * s.rhs[i] * (1.0 + 1e-12) + 1e-300;
  }
  s.fraction_ok = static_cast<double>(ok) / static_cast<double>(N);
  s.verdict = s.fraction_ok >= 0.95;

  // Integral form with its own constant, fitted on the same first half.
  double integral = 0.0;
  for (std::size_t i = 1; i < half; ++i) {
    auto g = [&](std::size_t j) { return s.y[j] + std::pow(s.y[j], s.beta); };
    integral += 0.5 * (s.t[i] - s.t[i - 1]) * (g(i) + g(i - 1));
    if (s.t[i] > 0.0)
      s.C1 = std::max(s.C1, (s.y[i] - s.delta) / (s.t[i] + integral));
  }
  if (s.delta > 0.0 && s.C1 > 0.0) {
    const double d2 = 2.0 * s.delta;
    s.T_pred = std::min(1.0, s.delta / (s.C1 * (1.0 + d2 + std::pow(d2, s.beta))));
  } else {
    s.T_pred = 1.0;
  }
  double intF = 0.0;
  for (std::size_t i = 0; i < N && s.t[i] <= s.T_pred + kTimeTol; ++i) {
    s.sup_y = std::max(s.sup_y, s.y[i]);
    if (i > 0)
      intF += 0.5 * (s.t[i] - s.t[i - 1]) * (s.F[i] + s.F[i - 1]);
  }
  s.energy = s.sup_y + intF;
  s.small = s.sup_y <= 4.0 * s.delta;
  return s;
}

namespace {

Rational rpow(const Rational &x, int k) {
  Rational r = 1;
  for (int i = 0; i < k; ++i)
    r *= x;
  return r;
}

} // namespace

Step4Audit audit_step4(const Rational &C1, const Rational &c2_root6,
                       const Rational &e0_root18, const Rational &eta_root4,
                       const Rational &t, const Rational &K, int levels) {
  if (c2_root6 <= 0 || e0_root18 <= 0 || eta_root4 <= 0 || t <= 0 || K < 0 || C1 < 0)
    throw std::invalid_argument("step-4 audit needs positive inputs");
  Step4Audit a;
  a.C1 = C1;
  a.C2 = rpow(c2_root6, 6);
  a.E0 = rpow(e0_root18, 18);
  a.eta = rpow(eta_root4, 4);
  a.t = t;
  a.K = K;
  const Rational e23 = rpow(e0_root18, 12), e12 = rpow(e0_root18, 9),
                 e13 = rpow(e0_root18, 6), e149 = rpow(e0_root18, 28),
                 e53 = rpow(e0_root18, 30);
  const Rational c43 = rpow(c2_root6, 8), c12 = rpow(c2_root6, 3);
  const Rational eta34 = rpow(eta_root4, 3);
  const Rational &eta = a.eta;

  const Rational lead = std::max<Rational>(
      {Rational(64 * a.C2), Rational(256 * c43), Rational(8 * c12)});
  const Rational inner = std::max<Rational>(
      {Rational(e23 / t), e149, Rational(e23 * (1 + K)), Rational(e13 * K)});
  a.eta_formula = lead * inner;
  a.eta_dominates = eta >= a.eta_formula;

  const Rational rest[4] = {Rational(1 / (eta * t)), Rational(e12 / eta34),
                            Rational((1 + K) / eta), Rational(K * K / (eta * eta))};
  const Rational pre = 8 * a.C2 * e23;
  a.terms_below_eighth = true;
  Rational X = 1;
  for (const auto &r : rest) {
    a.terms_below_eighth = a.terms_below_eighth && pre * r <= Rational(1, 8);
    X += r;
  }
  a.first_term_below_half = 8 * (C1 + a.C2) * e23 <= Rational(1, 2);
  a.reduced_holds = 1 >= 8 * (C1 + a.C2) * e23 + pre * (X - 1);

  a.chain_holds = true;
  bool first = true;
  for (int n = 0; n < levels; ++n) {
    const Rational Bn53 = e53 / rpow(Rational(32), n);  // (8^{-n} E0)^{5/3}
    const Rational Bn1 = a.E0 / rpow(Rational(8), n + 1);
    const Rational rhs = C1 * Bn53 + a.C2 * rpow(Rational(4), n) * X * Bn53;
    const Rational slack = Bn1 - rhs;
    if (first || slack < a.min_chain_slack)
      a.min_chain_slack = slack;
    first = false;
    a.chain_holds = a.chain_holds && slack >= 0;
  }
  return a;
}

std::string ladder_csv(const IterationLadder &L, const RecurrenceFit &fit) {
  std::ostringstream os;
  os << "# schema_version: 1\n";
  os << "# regime: " << (L.regime == LadderRegime::Critical ? "critical" : "subcritical")
     << "\n";
  os << "# K: " << fmt_double(L.K) << "\n# amplitude: " << fmt_double(L.amplitude)
     << "\n# t: " << fmt_double(L.t) << "\n# T: " << fmt_double(L.T)
     << "\n# p: " << fmt_double(L.p) << "\n# m: " << fmt_double(L.m) << "\n";
  os << "# verdict: " << fit.verdict << "\n# C_hat: " << fmt_double(fit.C_hat)
     << "\n# C_lemma: " << fmt_double(fit.C_lemma) << "\n# eps0: " << fmt_double(fit.eps0)
     << "\n# C_star: " << fmt_double(fit.C_star) << "\n";
  os << "n,ell,t_n,E,A,B,barrier\n";
  for (std::size_t n = 0; n < L.E.size(); ++n)
    os << n << ',' << fmt_double(L.ell[n]) << ',' << fmt_double(L.times[n]) << ','
       << fmt_double(L.E[n]) << ',' << fmt_double(L.A[n]) << ',' << fmt_double(L.B[n])
       << ',' << fmt_double(L.barrier[n]) << '\n';
  return os.str();
}

std::string propagation_csv(const PropagationSeries &s) {
  std::ostringstream os;
  os << "# schema_version: 1\n# K: " << fmt_double(s.K) << "\n# m: " << fmt_double(s.m)
     << "\n# C: " << fmt_double(s.C) << "\n# fraction_ok: " << fmt_double(s.fraction_ok)
     << "\n# T_pred: " << fmt_double(s.T_pred) << "\n";
  os << "t,y,z,F,G,dydt,rhs\n";
  for (std::size_t i = 0; i < s.t.size(); ++i)
    os << fmt_double(s.t[i]) << ',' << fmt_double(s.y[i]) << ',' << fmt_double(s.z[i]) << ','
       << fmt_double(s.F[i]) << ',' << fmt_double(s.G[i]) << ',' << fmt_double(s.dydt[i])
       << ',' << fmt_double(s.rhs[i]) << '\n';
  return os.str();
}

} // namespace landau

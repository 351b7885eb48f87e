// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "landau/coefficients.hpp"
#include "landau/config.hpp"
#include "landau/degiorgi.hpp"
#include "landau/diagnostics.hpp"
#include "landau/errors.hpp"
#include "landau/experiment.hpp"
#include "landau/grid.hpp"
#include "landau/inequalities.hpp"
#include "landau/initial_data.hpp"
#include "landau/solver.hpp"

namespace fs = std::filesystem;
using namespace landau;

namespace {

int failures = 0;
std::set<int> reported;

void verdict(int id, bool ok, const std::string &detail) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  reported.insert(id);
  if (!ok)
    ++failures;
}

std::string num(double v) {
  char b[64];
  std::snprintf(b, sizeof b, "%.4g", v);
  return b;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Per-step quantities gathered through the run observer.
struct StepRecord {
  double t = 0.0;
  double mass = 0.0;
  std::array<double, 3> p{};
  double energy = 0.0;
  double entropy = 0.0;
  double fisher = 0.0;
  double linf = 0.0;
};

struct Run {
  std::string name;
  InitialData init;
  Trajectory traj;
  std::vector<StepRecord> steps;
  double dt = 0.0;
};

Run simulate(const std::string &name, InitialDataConfig idc, int n, double T, double dt_max,
             long cadence) {
  const VelocityGrid g = make_grid(n, 8.0);
  Run r;
  r.name = name;
  r.init = make_initial_data(idc, g);
  r.dt = dt_max;
  const ScalarField x = coordinate_field(g, 0), y = coordinate_field(g, 1),
                    z = coordinate_field(g, 2), r2 = weight_field(g, 2.0);
  RunOptions opt;
  opt.include_initial = true;
  opt.cadence = cadence;
  opt.observer = [&](const SimulationState &s) {
    StepRecord rec;
    rec.t = s.t;
    rec.mass = integrate(s.f);
    rec.p = {integrate_product(x, s.f), integrate_product(y, s.f), integrate_product(z, s.f)};
    rec.energy = integrate_product(r2, s.f) - rec.mass; // <v>^2 - 1 = |v|^2
    rec.entropy = entropy(s.f);
    rec.fisher = fisher_information(s.f);
    rec.linf = max_value(s.f);
    r.steps.push_back(rec);
  };
  StepControl c;
  c.dt_max = dt_max;
  const auto t0 = std::chrono::steady_clock::now();
  r.traj = run(r.init.f, T, c, opt);
  std::printf("  [%s] n=%d steps=%ld snapshots=%zu %.1fs\n", name.c_str(), n, r.traj.steps,
              r.traj.snapshots.size(), seconds_since(t0));
  std::fflush(stdout);
  return r;
}

InitialDataConfig family(const std::string &f) {
  InitialDataConfig c;
  c.family = f;
  return c;
}

// ---------------------------------------------------------------- 1

void criterion_convolution() {
  const auto t0 = std::chrono::steady_clock::now();
  const ConvolveCheck cc = convolve_check(16, 8.0, 7);
  const double wall = seconds_since(t0);
  verdict(1, cc.max_rel_error <= 1e-10 && wall < 10.0,
          "n=16 max rel error " + num(cc.max_rel_error) + " (<= 1e-10), runtime " +
              num(wall) + " s (< 10 s; fft " + num(cc.fft_seconds) + " s, direct " +
              num(cc.direct_seconds) + " s)");
}

// ---------------------------------------------------------------- 2

double laplacian_residual(int n) {
  const VelocityGrid g = make_grid(n, 8.0);
  const ScalarField mu = maxwellian(g);
  const ScalarField a = CoefficientEngine::for_grid(g)->convolve(mu, KernelComponent::Scalar);
  const ScalarField lap = laplacian(a);
  double num2 = 0.0, den2 = 0.0;
  for (int i = 1; i + 1 < n; ++i)
    for (int j = 1; j + 1 < n; ++j)
      for (int k = 1; k + 1 < n; ++k) {
        const std::size_t q = g.index(i, j, k);
        const double d = -lap[q] - mu[q];
        num2 += d * d;
        den2 += mu[q] * mu[q];
      }
  return std::sqrt(num2 / den2);
}

void criterion_potential() {
  const VelocityGrid g = make_grid(64, 8.0);
  const ScalarField mu = maxwellian(g);
  const ScalarField a = CoefficientEngine::for_grid(g)->convolve(mu, KernelComponent::Scalar);
  double err_a = 0.0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        const double r = std::hypot(g.node(i), g.node(j), g.node(k));
        const double exact = std::erf(r / std::numbers::sqrt2) / (4.0 * std::numbers::pi * r);
        err_a = std::max(err_a, std::abs(a.at(i, j, k) - exact) / exact);
      }

  // trace identity on random positive fields
  double err_tr = 0.0;
  const VelocityGrid gr = make_grid(24, 8.0);
  const auto engine = CoefficientEngine::for_grid(gr);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    Random rng(seed);
    ScalarField f(gr);
    for (double &v : f.values)
      v = rng.uniform();
    const CoefficientSet cs = engine->compute(f);
    for (std::size_t q = 0; q < gr.size(); ++q) {
      const double tr = cs.A.c[XX][q] + cs.A.c[YY][q] + cs.A.c[ZZ][q];
      err_tr = std::max(err_tr, std::abs(tr - cs.a[q]) / std::abs(cs.a[q]));
    }
  }

  const double r32 = laplacian_residual(32), r64 = laplacian_residual(64);
  const double order = std::log2(r32 / r64);
  verdict(2,
          err_a <= 1e-3 && err_tr <= 1e-10 && r64 <= 5e-2 && std::abs(order - 2.0) <= 0.5,
          "a[mu] vs erf max rel " + num(err_a) + " (<= 1e-3); tr A = a max rel " +
              num(err_tr) + " (<= 1e-10); -lap a vs f rel L2 " + num(r32) + " (n=32), " +
              num(r64) + " (n=64, <= 5e-2), order " + num(order) + " (2 +- 0.5)");
}

// ---------------------------------------------------------------- 3

double outside_share(const ScalarField &f, double radius, double weight_power) {
  const VelocityGrid &g = f.grid;
  double in = 0.0, all = 0.0;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        const double r2 = g.node(i) * g.node(i) + g.node(j) * g.node(j) + g.node(k) * g.node(k);
        const double w = std::pow(r2, 0.5 * weight_power) * f.at(i, j, k);
        all += w;
        if (r2 <= radius * radius)
          in += w;
      }
  return 1.0 - in / all;
}

void criterion_conservation(const Run &r) {
  const ScalarField &f0 = r.init.f;
  const double l = f0.grid.l;
  const double tail_mass = outside_share(f0, 0.5 * l, 0.0);
  const double tail_energy = outside_share(f0, 0.5 * l, 2.0);
  const auto &s = r.steps;
  double step_drift = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i)
    step_drift = std::max(step_drift, std::abs(s[i].mass - s[i - 1].mass) / s.front().mass);
  const double e_drift = std::abs(s.back().energy - s.front().energy) / s.front().energy;
  double p_drift = 0.0;
  for (int d = 0; d < 3; ++d)
    p_drift = std::max(p_drift, std::abs(s.back().p[d] - s.front().p[d]));
  p_drift /= std::sqrt(s.front().mass * s.front().energy); // thermal momentum scale
  verdict(3,
          tail_mass <= 1e-4 && tail_energy <= 1e-4 && step_drift <= 1e-12 &&
              e_drift <= 1e-2 && p_drift <= 1e-2,
          r.name + " T=1: mass/energy outside l/2 " + num(tail_mass) + "/" + num(tail_energy) +
              "; per-step mass drift " + num(step_drift) + " (<= 1e-12); energy drift " +
              num(e_drift) + ", momentum drift " + num(p_drift) + " (<= 1e-2)");
}

// ---------------------------------------------------------------- 4

struct MonotonicityStats {
  double entropy_rise = 0.0; // max per-step increase
  double fisher_rise = 0.0;  // max per-step relative increase after step 10
  double fisher_rise_t1 = 0.0; // same, restricted to t <= 1
};

MonotonicityStats monotonicity(const Run &r) {
  MonotonicityStats m;
  const auto &s = r.steps;
  for (std::size_t i = 1; i < s.size(); ++i) {
    m.entropy_rise = std::max(m.entropy_rise, s[i].entropy - s[i - 1].entropy);
    if (i > 10) {
      const double rel = (s[i].fisher - s[i - 1].fisher) / s[i - 1].fisher;
      m.fisher_rise = std::max(m.fisher_rise, rel);
      if (s[i].t <= 1.0 + 1e-12)
        m.fisher_rise_t1 = std::max(m.fisher_rise_t1, rel);
    }
  }
  return m;
}

void criterion_monotonicity(const std::vector<const Run *> &runs) {
  bool ok = true;
  std::string detail;
  std::vector<double> rises;
  for (const Run *r : runs) {
    const MonotonicityStats m = monotonicity(*r);
    ok = ok && m.entropy_rise <= 1e-8 && m.fisher_rise <= 1e-3;
    rises.push_back(m.fisher_rise_t1);
    detail += r->name + ": entropy rise " + num(m.entropy_rise) + ", Fisher rel rise " +
              num(m.fisher_rise) + "; ";
  }
  // violations must shrink at order >= 1 as h halves (n = 32 -> 64); none at all passes
  const double coarse = rises.front(), fine = rises.back();
  double order = std::numeric_limits<double>::infinity();
  if (fine > 0.0)
    order = coarse > 0.0 ? std::log2(coarse / fine) : 0.0;
  ok = ok && order >= 1.0;
  detail += "refinement order " + (std::isinf(order) ? std::string("inf (no violation at n=64)")
                                                      : num(order));
  verdict(4, ok, detail);
}

// ---------------------------------------------------------------- 5

void criterion_smoothing(const Run &a, const Run &b) {
  const SmoothingFit fa = smoothing_rate_fit(a.traj, 1.5, 10.0 * a.dt, 1.0);
  const SmoothingFit fb = smoothing_rate_fit(b.traj, 1.5, 10.0 * b.dt, 1.0);
  const double spread = std::abs(fa.sup_const - fb.sup_const) / fb.sup_const;
  verdict(5,
          std::isfinite(fa.sup_const) && std::isfinite(fb.sup_const) && spread <= 0.1 &&
              fa.slope >= -1.15 && fb.slope >= -1.15,
          "sup t|f|_inf " + num(fa.sup_const) + " (" + a.name + "), " + num(fb.sup_const) +
              " (" + b.name + "), spread " + num(spread) + " (<= 0.1); slopes " +
              num(fa.slope) + ", " + num(fb.slope) + " (>= -1.15)");
}

// ---------------------------------------------------------------- 6 and 7

void criterion_barrier(const std::vector<const Run *> &runs) {
  bool ok = true;
  std::string detail;
  for (const Run *r : runs) {
    BarrierParams b;
    b.a = r->init.barrier_a;
    b.k = 10.0;
    b.n_weight = -6.0;
    b.regime = BarrierRegime::Critical;
    b.eta = critical_sufficient_rate(b.n_weight, b.k, measured_critical_M(r->traj));
    const MonitorSeries ms = minimum_principle_monitor(r->traj, b);
    const double h = r->traj.grid.h;
    const double min_ratio = *std::min_element(ms.min_ratio.begin(), ms.min_ratio.end());
    const bool tol_ok = std::abs(ms.tolerance - (1e-8 + h * h)) <= 1e-12;
    ok = ok && !ms.invalid_hypothesis && min_ratio >= 1.0 - 10.0 * h * h && ms.nonincreasing &&
         tol_ok;
    detail += r->name + ": a " + num(b.a) + " eta " + num(b.eta) + " min ratio " +
              num(min_ratio) + " (>= " + num(1.0 - 10.0 * h * h) + "), monitor rise " +
              num(ms.max_increase) + " (tol " + num(ms.tolerance) + "); ";
  }
  verdict(6, ok, detail);
}

double sup_t_fisher(const Run &r) {
  double sup = 0.0;
  for (const auto &s : r.traj.snapshots)
    if (s.t > 10.0 * r.dt && s.t <= 1.0 + 1e-12)
      sup = std::max(sup, s.t * fisher_information(s.f));
  return sup;
}

void criterion_fisher_bound(const Run &a, const Run &b) {
  const double sa = sup_t_fisher(a), sb = sup_t_fisher(b);
  const double spread = std::abs(sa - sb) / sb;
  verdict(7, std::isfinite(sa) && std::isfinite(sb) && sa > 0.0 && spread <= 0.2,
          "sup t i(f) on (10 dt, 1]: " + num(sa) + " (" + a.name + "), " + num(sb) + " (" +
              b.name + "), spread " + num(spread) + " (<= 0.2)");
}

// ---------------------------------------------------------------- 8

void criterion_eps_regularity(const std::vector<const Run *> &runs) {
  bool ok = true;
  std::string detail;
  for (const Run *r : runs) {
    const Trajectory &tr = r->traj;
    const double T = tr.t_end(), t = 0.5 * T;
    const double K = 0.5 * max_value(r->init.f);
    double amp = measured_linf(tr, 0.5 * t, T) - K;
    if (!(amp > 0.0))
      amp = K;
    const IterationLadder L = measure_ladder(tr, LadderRegime::Critical, K, amp, t, T, 8);
    const double meas = measured_linf(tr, t, T);
    try {
      const RecurrenceFit fit = fit_recurrence(L);
      const LinfPrediction pred = predict_linf_bound(fit, L.E.front(), K, t, L.p);
      const double ratio = ladder_decay_ratio(L);
      const bool sound = meas <= pred.bound;
      const bool decay = !pred.hypothesis_ok || ratio <= 0.9;
      ok = ok && sound && decay;
      detail += r->name + ": |f|_inf " + num(meas) + " <= " + num(pred.bound) +
                (sound ? "" : " VIOLATED") + ", E0 " + num(fit.E0) + " vs eps0 " +
                num(fit.eps0) + (pred.hypothesis_ok ? ", decay " + num(ratio) : ", above eps0") +
                "; ";
    } catch (const NumericError &) {
      // every level above the floor vanishes: f never exceeds K + amp/8 on [t, T]
      const bool sound = meas <= K + amp;
      ok = ok && sound;
      detail += r->name + ": degenerate ladder, |f|_inf " + num(meas) + " <= K + amp " +
                num(K + amp) + "; ";
    }
  }
  verdict(8, ok, detail);
}

// ---------------------------------------------------------------- 9

// K with y(0) = int <v>^{9/2} (f - K)_+^{3/2} = delta, by bisection (y decreases in K).
double level_for(const ScalarField &f, double delta) {
  double lo = 0.0, hi = max_value(f);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (level_set_integrals(f, mid, 1.5, 4.5).a > delta)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

void criterion_propagation(const std::vector<const Run *> &runs) {
  bool ok = true;
  std::string detail;
  for (const Run *r : runs) {
    const ScalarField &f0 = r->traj.snapshots.front().f;
    const double delta = 0.1 * level_set_integrals(f0, 0.0, 1.5, 4.5).a;
    const double K = level_for(f0, delta);
    const PropagationSeries ps = propagation_ode_monitor(r->traj, K);
    ok = ok && ps.small;
    detail += r->name + ": K " + num(K) + " delta " + num(ps.delta) + " T_pred " +
              num(ps.T_pred) + " sup y " + num(ps.sup_y) + " (<= " + num(4.0 * ps.delta) +
              "); ";
  }
  verdict(9, ok, detail);
}

// ---------------------------------------------------------------- 10

void criterion_inequalities() {
  const InequalitySuite s = run_inequality_suite(InequalitiesConfig{});
  std::string detail;
  for (const auto &r : s.reports)
    detail += r.name + (r.pass ? " ok" : " FAILED") + "; ";
  detail += "cutoff scale deviation " + num(s.cutoff_scale_deviation);
  verdict(10, s.pass, detail);
}

// ---------------------------------------------------------------- 11

void criterion_equilibration(const Run &r) {
  std::vector<double> d;
  for (const auto &s : r.traj.snapshots)
    d.push_back(equilibrium_distance(s.f).L1);
  bool strict = true;
  for (std::size_t i = 1; i < d.size(); ++i)
    strict = strict && d[i] < d[i - 1];
  const double ratio = d.back() / d.front();
  verdict(11, strict && ratio < 0.5,
          r.name + " to T=" + num(r.traj.t_end()) + ": |f - mu|_L1 " + num(d.front()) +
              " -> " + num(d.back()) + " (ratio " + num(ratio) + ", needs < 0.5), " +
              (strict ? "strictly decreasing" : "NOT strictly decreasing"));
}

// ---------------------------------------------------------------- 12

int run_cli(const std::string &cli, const std::string &args) {
  const std::string cmd = "\"" + cli + "\" " + args + " > /dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::map<std::string, std::string> read_csvs(const fs::path &dir) {
  std::map<std::string, std::string> out;
  for (const auto &e : fs::directory_iterator(dir))
    if (e.path().extension() == ".csv") {
      std::ifstream in(e.path(), std::ios::binary);
      std::ostringstream ss;
      ss << in.rdbuf();
      out[e.path().filename().string()] = ss.str();
    }
  return out;
}

void criterion_determinism(const std::string &cli) {
  const fs::path root =
      fs::temp_directory_path() / ("landau_acceptance_" + std::to_string(getpid()));
  fs::create_directories(root);
  const auto write = [&](const std::string &name, const std::string &text) {
    std::ofstream(root / name) << text;
    return (root / name).string();
  };
  const std::string good = write("good.ini", "[grid]\nn = 24\n[initial_data]\nfamily = mixture\n"
                                             "seed = 5\n[run]\nT = 0.3\ndt_max = 0.02\n"
                                             "snapshot_cadence = 2\nsnapshots = none\n"
                                             "[eps_regularity]\n[ladder]\n[barrier]\n");
  const std::string odd = write("odd.ini", "[grid]\nn = 63\n");
  const std::string sub = write("sub.ini", "[grid]\nn = 16\n[barrier]\nregime = subcritical\n"
                                           "k = 4\n");
  const int c1 = run_cli(cli, "run " + good + " --out " + (root / "a").string());
  const int c2 = run_cli(cli, "run " + good + " --out " + (root / "b").string());
  bool same = c1 == 0 && c2 == 0;
  std::size_t files = 0;
  if (same) {
    const auto A = read_csvs(root / "a"), B = read_csvs(root / "b");
    same = !A.empty() && A == B;
    files = A.size();
  }
  const int c_odd = run_cli(cli, "run " + odd + " --out " + (root / "c").string());
  const int c_sub = run_cli(cli, "run " + sub + " --out " + (root / "d").string());

  // the same codes through the library entry points
  std::string odd_msg;
  int lib_odd = 0;
  try {
    parse_config("[grid]\nn = 63\n");
  } catch (const std::exception &e) {
    lib_odd = exit_code_for(e);
    odd_msg = e.what();
  }
  ExperimentConfig sc = parse_config("[grid]\nn = 16\n[barrier]\nregime = subcritical\nk = 4\n");
  sc.output.dir = (root / "e").string();
  const int lib_sub = run_experiment(sc).exit_code;
  fs::remove_all(root);

  const bool odd_ok = c_odd == 2 && lib_odd == 2 &&
                      odd_msg.find("grid.n must be even") != std::string::npos;
  verdict(12, same && odd_ok && c_sub == 4 && lib_sub == 4,
          std::to_string(files) + " CSVs " + (same ? "byte-identical" : "DIFFER") +
              " across reruns; n=63 exit " + std::to_string(c_odd) + "/" +
              std::to_string(lib_odd) + " (2, \"" + odd_msg + "\"); subcritical k=4 exit " +
              std::to_string(c_sub) + "/" + std::to_string(lib_sub) + " (4)");
}

// Runs a criterion, turning an unexpected exception into a FAIL line.
void guarded(int id, const std::function<void()> &body) {
  try {
    body();
  } catch (const std::exception &e) {
    verdict(id, false, std::string("exception: ") + e.what());
  }
}

} // namespace

int main(int argc, char **argv) {
  const std::string cli = argc > 1 ? argv[1] : LANDAU_CLI_PATH;
  const auto t0 = std::chrono::steady_clock::now();

  guarded(1, criterion_convolution);
  guarded(2, criterion_potential);

  Run ng48, ng64, bm32, bm48, bm64, pt48, pt64;
  std::vector<Run> mix;
  try {
    std::printf("  simulating...\n");
    ng48 = simulate("narrow_gaussian n=48", family("narrow_gaussian"), 48, 1.0, 0.01, 2);
    ng64 = simulate("narrow_gaussian n=64", family("narrow_gaussian"), 64, 1.0, 0.01, 2);
    bm32 = simulate("bimaxwellian n=32", family("bimaxwellian"), 32, 1.0, 0.05, 2);
    bm48 = simulate("bimaxwellian n=48", family("bimaxwellian"), 48, 1.0, 0.05, 2);
    bm64 = simulate("bimaxwellian n=64", family("bimaxwellian"), 64, 5.0, 0.05, 10);
    pt48 = simulate("polytail n=48", family("polytail"), 48, 1.0, 0.02, 1);
    pt64 = simulate("polytail n=64", family("polytail"), 64, 1.0, 0.02, 1);
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      // concentrated blobs: narrower components, energy left below 3
      InitialDataConfig c = family("mixture");
      c.seed = seed;
      c.sigma = 0.6;
      c.normalize_energy = false;
      mix.push_back(simulate("mixture seed " + std::to_string(seed), c, 48, 1.0, 0.02, 1));
    }

    guarded(3, [&] { criterion_conservation(ng64); });
    guarded(4, [&] { criterion_monotonicity({&bm32, &bm48, &bm64}); });
    guarded(5, [&] { criterion_smoothing(ng48, ng64); });
    guarded(6, [&] { criterion_barrier({&pt48, &pt64}); });
    guarded(7, [&] { criterion_fisher_bound(pt48, pt64); });
    guarded(8, [&] {
      criterion_eps_regularity({&ng48, &ng64, &bm32, &bm48, &bm64, &pt48, &pt64, &mix[0],
                                &mix[1], &mix[2]});
    });
    guarded(9, [&] { criterion_propagation({&mix[0], &mix[1], &mix[2]}); });
  } catch (const std::exception &e) {
    std::printf("  simulation aborted: %s\n", e.what());
  }
  guarded(10, criterion_inequalities);
  if (!bm64.traj.snapshots.empty())
    guarded(11, [&] { criterion_equilibration(bm64); });
  guarded(12, [&] { criterion_determinism(cli); });

  for (int id = 1; id <= 12; ++id)
    if (!reported.count(id))
      verdict(id, false, "not evaluated");
  std::printf("%d of 12 criteria failed, %.0f s\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}

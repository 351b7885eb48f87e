#include "landau/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>

#include "landau/coefficients.hpp"
#include "landau/degiorgi.hpp"
#include "landau/errors.hpp"
#include "landau/format.hpp"
#include "landau/initial_data.hpp"
#include "landau/parallel.hpp"
#include "landau/solver.hpp"
#include "landau/svg.hpp"

namespace landau {

namespace fs = std::filesystem;

int exit_code_for(const std::exception &e) {
  if (dynamic_cast<const ConfigError *>(&e))
    return 2;
  if (dynamic_cast<const NumericError *>(&e))
    return 3;
  if (dynamic_cast<const HypothesisError *>(&e))
    return 4;
  return 1;
}

InequalitySuite run_inequality_suite(const InequalitiesConfig &c) {
  InequalitySuite s;
  const VelocityGrid g = make_grid(c.n, c.l);
  const auto corpus = make_corpus(g, c.corpus_seed, c.corpus_size);
  s.reports.push_back(check_weighted_sobolev(corpus, 4.5, c.corpus_seed));
  s.reports.push_back(check_interpolation(corpus, 1.5, 2.5, 4.5, c.corpus_seed));
  s.reports.push_back(check_interpolation(corpus, 1.5, 13.0 / 6.0, 4.5, c.corpus_seed));
  const auto pairs = make_poincare_pairs(corpus, c.corpus_seed);
  s.reports.push_back(check_eps_poincare(pairs, 2.0, 2.0, {1e-2, 1e-1, 1.0}, c.corpus_seed));
  s.cutoff_unit = build_cutoff(1.0);
  s.cutoff_large = build_cutoff(10.0);
  s.check_unit = verify_cutoff(s.cutoff_unit);
  s.check_large = verify_cutoff(s.cutoff_large);
  s.cutoff_scale_deviation = std::abs(s.cutoff_unit.C_hat - s.cutoff_large.C_hat);
  s.pass = s.check_unit.all() && s.check_large.all() && s.cutoff_scale_deviation <= 1e-10 &&
           std::isfinite(s.cutoff_unit.C_hat);
  for (const auto &r : s.reports)
    s.pass = s.pass && r.pass;
  return s;
}

std::string inequality_suite_summary(const InequalitySuite &s) {
  std::ostringstream os;
  for (const auto &r : s.reports)
    os << report_summary(r);
  const auto &c = s.cutoff_unit;
  os << "cutoff: C_hat " << fmt_double(c.C_hat) << " (R=10: " << fmt_double(s.cutoff_large.C_hat)
     << "), sqrt(eta) form " << fmt_double(c.C_sqrt_eta) << ", sqrt(1-eta) form "
     << fmt_double(c.C_sqrt_one_minus) << ", max-denominator form " << fmt_double(c.C_loose)
     << "\n";
  os << "cutoff checks: range " << s.check_unit.range << " support " << s.check_unit.support
     << " bounds " << (s.check_unit.bound_sqrt_eta && s.check_unit.bound_sqrt_one_minus)
     << " smooth " << s.check_unit.smooth << " (R^2 max|eta''| "
     << fmt_short(s.check_unit.max_second_difference) << ")\n";
  os << "inequality suite: " << (s.pass ? "PASS" : "FAIL") << "\n";
  return os.str();
}

DiagnosticsOptions diagnostics_options(const DiagnosticsConfig &c) {
  DiagnosticsOptions o;
  o.lp_pairs.clear();
  for (std::size_t i = 0; i < c.p_list.size(); ++i)
    o.lp_pairs.emplace_back(c.p_list[i], c.m_list.size() == 1 ? c.m_list[0] : c.m_list[i]);
  o.f_floor = c.f_floor;
  return o;
}

std::string diagnose_snapshots(const std::vector<std::string> &paths,
                               const DiagnosticsOptions &opt) {
  std::string out = diagnostics_csv_header(opt) + "\n";
  for (const auto &p : paths) {
    auto [f, t] = read_snapshot(p);
    const auto engine = CoefficientEngine::for_grid(f.grid);
    const CoefficientSet cs = engine->compute_unchecked(f);
    out += diagnostics_csv_row(record_field(f, t, cs, opt)) + "\n";
  }
  return out;
}

ConvolveCheck convolve_check(int n, double l, std::uint64_t seed) {
  ConvolveCheck out;
  out.n = n;
  const VelocityGrid g = make_grid(n, l);
  Random rng(seed);
  ScalarField f(g);
  for (double &v : f.values)
    v = rng.uniform();
  const CoefficientEngine engine(g);
  using clock = std::chrono::steady_clock;
  for (int c = 0; c < 7; ++c) {
    const auto comp = static_cast<KernelComponent>(c);
    const auto t0 = clock::now();
    const ScalarField fast = engine.convolve(f, comp);
    const auto t1 = clock::now();
    const ScalarField slow = serial::convolve_direct(f, engine.table(), comp);
    const auto t2 = clock::now();
    out.fft_seconds += std::chrono::duration<double>(t1 - t0).count();
    out.direct_seconds += std::chrono::duration<double>(t2 - t1).count();
    double scale = 0.0;
    for (double v : slow.values)
      scale = std::max(scale, std::abs(v));
    for (std::size_t q = 0; q < slow.values.size(); ++q)
      out.max_rel_error =
          std::max(out.max_rel_error, std::abs(fast.values[q] - slow.values[q]) / scale);
  }
  return out;
}

namespace {

struct Writer {
  fs::path dir;
  std::vector<std::string> *files;
  void text(const std::string &name, const std::string &body) {
    write_text_file((dir / name).string(), body);
    files->push_back(name);
  }
};

std::string snapshot_name(long step) {
  std::string s = std::to_string(step);
  return "snapshots/snap_" + std::string(s.size() < 8 ? 8 - s.size() : 0, '0') + s + ".lcf";
}

void run_body(const ExperimentConfig &c, ExperimentOutcome &out, std::ostream *log) {
  configure_threads();
  const VelocityGrid g = make_grid(c.grid.n, c.grid.l);
  Writer w{fs::path(c.output.dir), &out.files};
  fs::create_directories(w.dir);
  std::ostringstream sum;
  auto note = [&](const std::string &line) {
    sum << line << "\n";
    if (log)
      *log << line << "\n";
  };

  // hypotheses that can be decided before the run
  if (c.barrier.enabled && c.barrier.regime == "subcritical" && !(c.barrier.k > 5.0))
    throw HypothesisError("hypothesis: k > 5 required");

  note("# landau experiment summary");
  note("# schema_version: 1");
  const InitialData init = make_initial_data(c.initial_data, g);
  note("initial_data: " + init.family + " mass_residual " + fmt_short(init.mass_residual) +
       " momentum_residual " + fmt_short(init.momentum_residual) + " energy " +
       fmt_double(init.energy) + " tail_mass " + fmt_short(init.tail_mass));
  for (const auto &warn : init.warnings)
    note("warning: " + warn);
  if (c.initial_data.family == "polytail")
    note("initial_data: f_in >= a <v>^-" + fmt_short(init.barrier_k) + " with a = " +
         fmt_double(init.barrier_a));

  StepControl sc;
  sc.cfl = c.run.cfl;
  sc.dt_min = c.run.dt_min;
  sc.dt_max = c.run.dt_max;
  sc.positivity_clip = c.run.positivity_clip;
  RunOptions ro;
  ro.schedule = c.run.schedule;
  ro.cadence = c.run.snapshot_cadence;
  ro.include_initial = true;
  ro.dump_path = (w.dir / "nan_dump.lcf").string();
  const Trajectory traj = run(init.f, c.run.T, sc, ro);
  note("run: T " + fmt_double(traj.t_end()) + " steps " + std::to_string(traj.steps) +
       " snapshots " + std::to_string(traj.snapshots.size()) + " undershoot " +
       fmt_short(traj.undershoot) + " clipped_mass " + fmt_short(traj.clipped_mass));

  // diagnostics per snapshot
  DiagnosticsOptions dopt = diagnostics_options(c.diagnostics);
  double barrier_a = c.barrier.a;
  if (c.barrier.enabled && barrier_a == 0.0) {
    barrier_a = std::numeric_limits<double>::infinity();
    const int n = g.n;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const double x = g.node(i), y = g.node(j), z = g.node(k);
          barrier_a = std::min(barrier_a, init.f.at(i, j, k) *
                                              japanese_pow(x * x + y * y + z * z, c.barrier.k));
        }
  }
  if (c.barrier.enabled) {
    dopt.barrier_a = barrier_a;
    dopt.barrier_k = c.barrier.k;
  }
  const auto engine = CoefficientEngine::for_grid(g);
  std::vector<DiagnosticsRecord> recs;
  std::vector<CoefficientSet> coeffs;
  std::string csv = diagnostics_csv_header(dopt) + "\n";
  double sup_trace = 0.0, min_floor = std::numeric_limits<double>::infinity();
  for (const auto &s : traj.snapshots) {
    CoefficientSet cs = engine->compute_unchecked(s.f);
    recs.push_back(record_field(s.f, s.t, cs, dopt));
    csv += diagnostics_csv_row(recs.back()) + "\n";
    sup_trace = std::max(sup_trace, max_value(cs.a));
    min_floor = std::min(min_floor, cs.c0_hat);
    if (c.barrier.enabled)
      coeffs.push_back(std::move(cs));
  }
  w.text("diagnostics.csv", csv);

  bool entropy_ok = true, fisher_ok = true;
  for (std::size_t i = 1; i < recs.size(); ++i) {
    const double steps =
        std::max<long>(1, traj.snapshots[i].step - traj.snapshots[i - 1].step);
    entropy_ok = entropy_ok && recs[i].entropy - recs[i - 1].entropy <= 1e-8 * steps;
    if (traj.snapshots[i - 1].step >= 10)
      fisher_ok = fisher_ok &&
                  recs[i].fisher - recs[i - 1].fisher <= 1e-3 * steps * recs[i - 1].fisher;
  }
  note("monotonicity: entropy " + std::string(entropy_ok ? "nonincreasing" : "INCREASES") +
       ", fisher " + std::string(fisher_ok ? "nonincreasing" : "INCREASES"));
  note("mass drift: " + fmt_short(std::abs(recs.back().mass - recs.front().mass)) +
       " energy drift: " + fmt_short(std::abs(recs.back().energy - recs.front().energy)));

  // snapshots
  if (c.run.snapshots != "none") {
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
      if (c.run.snapshots == "ends" && i != 0 && i + 1 != traj.snapshots.size())
        continue;
      const auto &s = traj.snapshots[i];
      const std::string name = snapshot_name(s.step);
      fs::create_directories(w.dir / "snapshots");
      write_snapshot((w.dir / name).string(), s.f, s.t);
      out.files.push_back(name);
    }
  }

  // plots
  {
    PlotSeries linf, fisher, ent, tlinf;
    for (const auto &r : recs) {
      linf.x.push_back(r.t);
      linf.y.push_back(r.linf);
      fisher.x.push_back(r.t);
      fisher.y.push_back(r.fisher);
      ent.x.push_back(r.t);
      ent.y.push_back(r.entropy);
      tlinf.x.push_back(r.t);
      tlinf.y.push_back(r.t * r.linf);
    }
    w.text("plot_linf.svg", svg_line_plot(linf, "sup norm", "t", "|f|_inf"));
    w.text("plot_fisher.svg", svg_line_plot(fisher, "Fisher information", "t", "i(f)"));
    w.text("plot_entropy.svg", svg_line_plot(ent, "entropy", "t", "H(f)"));
    w.text("plot_t_linf.svg", svg_line_plot(tlinf, "t |f(t)|_inf", "t", "t |f|_inf"));
  }

  // eps-regularity and propagation
  double K_eps = c.eps_regularity.K > 0.0 ? c.eps_regularity.K : 0.5 * max_value(init.f);
  if (c.eps_regularity.enabled) {
    const double eps = eps_regularity(traj, K_eps, 0.0, traj.t_end());
    note("eps_regularity: K " + fmt_double(K_eps) + " eps " + fmt_double(eps));
    try {
      const PropagationSeries ps = propagation_ode_monitor(traj, K_eps);
      w.text("propagation.csv", propagation_csv(ps));
      note("propagation: delta " + fmt_double(ps.delta) + " C " + fmt_short(ps.C) +
           " fraction_ok " + fmt_short(ps.fraction_ok) + " T_pred " + fmt_short(ps.T_pred) +
           " sup_y " + fmt_double(ps.sup_y) + (ps.small ? " (< 4 delta)" : " (EXCEEDS 4 delta)"));
    } catch (const std::invalid_argument &e) {
      note(std::string("propagation: skipped, ") + e.what());
    }
  }

  // De Giorgi ladder
  if (c.ladder.enabled) {
    const LadderRegime regime =
        c.ladder.regime == "critical" ? LadderRegime::Critical : LadderRegime::Subcritical;
    const double T = traj.t_end();
    const double t = c.ladder.t > 0.0 ? c.ladder.t : 0.5 * T;
    const double K = c.ladder.K > 0.0 ? c.ladder.K
                                      : (regime == LadderRegime::Critical ? K_eps : 0.0);
    double amp = c.ladder.amplitude;
    if (amp <= 0.0) {
      amp = measured_linf(traj, 0.5 * t, T) - K;
      if (!(amp > 0.0))
        amp = K > 0.0 ? K : 1.0;
    }
    const IterationLadder L = measure_ladder(traj, regime, K, amp, t, T, c.ladder.N_levels,
                                             c.ladder.p > 0.0 ? c.ladder.p : -1.0);
    RecurrenceFit fit;
    std::string verdict;
    try {
      fit = fit_recurrence(L);
      verdict = fit.verdict;
    } catch (const NumericError &e) {
      fit.regime = regime;
      verdict = std::string("degenerate (") + e.what() + ")";
    }
    w.text("ladder.csv", ladder_csv(L, fit));
    note("ladder: " + c.ladder.regime + " K " + fmt_double(K) + " amplitude " + fmt_double(amp) +
         " t " + fmt_double(t) + " verdict " + verdict + " decay_ratio " +
         fmt_short(ladder_decay_ratio(L)));
    if (fit.C_hat > 0.0) {
      const LinfPrediction pred = predict_linf_bound(fit, L.E.front(), K, t, L.p);
      const double meas = measured_linf(traj, t, T);
      note("ladder bound: predicted " + fmt_double(pred.bound) + " measured " +
           fmt_double(meas) + (meas <= pred.bound ? " (sound)" : " (VIOLATED)") +
           (pred.hypothesis_ok ? "" : " [E0 above eps0]") + " eps0 " + fmt_short(fit.eps0) +
           " (as printed: " + fmt_short(fit.eps0_as_printed) + ")");
    }
  }

  // barrier and minimum principle
  if (c.barrier.enabled) {
    BarrierParams b;
    b.a = barrier_a;
    b.k = c.barrier.k;
    b.n_weight = c.barrier.n_weight;
    if (c.barrier.regime == "critical") {
      b.regime = BarrierRegime::Critical;
      const double M = measured_critical_M(traj);
      b.eta = critical_sufficient_rate(b.n_weight, b.k, M);
      note("barrier: critical M " + fmt_double(M) + " C(n,k) " +
           fmt_double(critical_barrier_constant(b.n_weight, b.k)) + " eta " + fmt_double(b.eta));
    } else {
      b.regime = BarrierRegime::Subcritical;
      const SubcriticalRate r = subcritical_sufficient_rate(b.k, sup_trace, min_floor);
      b.eta = r.eta;
      note("barrier: subcritical C1 " + fmt_double(r.C1_tilde) + " C2 " + fmt_double(r.C2_tilde) +
           " eta (Young form) " + fmt_double(r.eta_young) + " eta " + fmt_double(b.eta));
    }
    const MonitorSeries ms = minimum_principle_monitor(traj, b);
    std::ostringstream bc;
    bc << "# schema_version: 1\n# a: " << fmt_double(b.a) << "\n# k: " << fmt_double(b.k)
       << "\n# eta: " << fmt_double(b.eta) << "\n# n_weight: " << fmt_double(b.n_weight)
       << "\nt,integral,min_ratio\n";
    double min_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ms.t.size(); ++i) {
      bc << fmt_double(ms.t[i]) << ',' << fmt_double(ms.integral[i]) << ','
         << fmt_double(ms.min_ratio[i]) << '\n';
      min_ratio = std::min(min_ratio, ms.min_ratio[i]);
    }
    w.text("barrier.csv", bc.str());
    double residual = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i)
      if (traj.snapshots[i].t > 0.0)
        residual = std::max(residual, barrier_residual(traj.snapshots[i].f, coeffs[i], b,
                                                       traj.snapshots[i].t));
    if (ms.invalid_hypothesis)
      note("barrier: invalid-hypothesis (f_in not above the barrier)");
    note("barrier: monitor " + std::string(ms.nonincreasing ? "nonincreasing" : "INCREASES") +
         " max_increase " + fmt_short(ms.max_increase) + " tolerance " +
         fmt_short(ms.tolerance) + " min_ratio " + fmt_double(min_ratio) +
         " max_residual " + fmt_short(residual));
  }

  if (c.inequalities.enabled) {
    const InequalitySuite s = run_inequality_suite(c.inequalities);
    for (const auto &r : s.reports)
      w.text("inequality_" + r.name + ".csv", report_csv(r));
    sum << inequality_suite_summary(s);
  }

  sum << "config:\n" << config_to_text(c);
  out.summary = sum.str();
  w.text("summary.txt", out.summary);
}

} // namespace

ExperimentOutcome run_experiment(const ExperimentConfig &c, std::ostream *log) {
  ExperimentOutcome out;
  try {
    run_body(c, out, log);
  } catch (const std::exception &e) {
    out.exit_code = exit_code_for(e);
    out.message = e.what();
    if (log)
      *log << "error: " << e.what() << "\n";
  }
  return out;
}

} // namespace landau

#pragma once

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "landau/solver.hpp"

namespace landau {

enum class LadderRegime { Critical, Subcritical };

// Thresholds l_n = K + (1 - 2^{-n}) amplitude and times t_n = t (1 - 2^{-n}).
// Critical: E_n = E_{l_n}(t_n, T) with p = 3/2, m = 9/2.
// Subcritical: E_n = A^{2/5} B^{3/5}; the usual choice is K = 0 and amplitude = the
// level the iteration is meant to certify.
struct IterationLadder {
  LadderRegime regime = LadderRegime::Critical;
  double K = 0.0;
  double amplitude = 0.0;
  double t = 0.0;
  double T = 0.0;
  double p = 1.5;
  double m = 4.5;
  std::vector<double> ell;
  std::vector<double> times;
  std::vector<double> E;
  std::vector<double> A;
  std::vector<double> B;
  std::vector<double> barrier; // B_n = 8^{-n} E_0 (critical), 2^{-3 kappa n / 2} E_0 (subcritical)
  double floor = 0.0;          // levels with E_n below 10 * floor are left out of fits
};

IterationLadder measure_ladder(const Trajectory &traj, LadderRegime regime, double K,
                               double amplitude, double t, double T, int levels = 8,
                               double p = -1.0, double m = 4.5);

// Largest E_{n+1} / E_n over levels n < n_max with E_n above the floor; 0 if none.
double ladder_decay_ratio(const IterationLadder &L, int n_max = 6);

struct RecurrenceFit {
  LadderRegime regime = LadderRegime::Critical;
  bool vacuous = false;
  std::size_t used_levels = 0;
  // Gain-of-integrability form E_{n+1} <= C [bracket] A_n^{2/3} B_n.
  double C_lemma = 0.0;
  std::vector<double> slack_lemma;
  // Iteration form. Critical: E_{n+1} <= C 4^n X E_n^{5/3} with
  // X = 1 + 1/(eta t) + E_0^{1/2}/eta^{3/4} + (1+K)/eta + K^2/eta^2.
  // Subcritical: E_{n+1} <= C 2^{kappa n} X E_n^{5/3} with
  // X = 1/(K^{2p/3} t) + 1/K^{2p/3} + 1/K^{(2p-3)/3}.
  double C_hat = 0.0;
  std::vector<double> slack; // 1 - E_{n+1} / (C_hat ... E_n^{5/3}), >= 0 by construction
  double X = 0.0;
  double E0 = 0.0;
  double kappa = 0.0;
  // Derived constants used by predict_linf_bound.
  double C1 = 1.0;
  double C2 = 1.0;
  double eps0 = 0.0;       // min(1, 1 / (64 (C1 + C2)^{3/2}))
  double eps0_as_printed = 0.0; // max(1, ...), the literal reading
  double C_star = 0.0;
  double barrier_B = 8.0;
  // The fitted constants close the barrier induction B_{n+1} >= rhs(B_n).
  bool barrier_closes = false;
  std::string verdict;
};

// time_unit rescales the (t_{n+1} - t_n) and t entries of the brackets.
RecurrenceFit fit_recurrence(const IterationLadder &L, double time_unit = 1.0);

struct LinfPrediction {
  double bound = 0.0;
  double level = 0.0; // K + eta (critical) or the certified K (subcritical)
  bool hypothesis_ok = false; // E_0 <= eps0 for the critical scheme
};
// Critical: C*(K+1) + C* E0^{2/3} / t. Subcritical:
// C max(E0^{1/p} (1 + t^{-3/(2p)}), E0^{2/(2p-3)}) with C = max((3C*B)^{3/(2p)}, (3C*B)^{3/(2p-3)}).
LinfPrediction predict_linf_bound(const RecurrenceFit &fit, double E0, double K, double t,
                                  double p);

// Sup of f over snapshots with t <= s <= T.
double measured_linf(const Trajectory &traj, double t, double T);

// beta_1 = (3 - 2q) / (q - 1) with q = min(4/3, m / (m - 2)).
double beta1(double m);

struct PropagationSeries {
  double K = 0.0;
  double m = 4.5;
  std::vector<double> t, y, z, F, G, dydt, rhs;
  double C = 0.0;              // fitted on the first half of the samples
  double fraction_ok = 0.0;    // share of samples with dy/dt + F <= C rhs
  bool verdict = false;        // fraction_ok >= 0.95 (or vacuous)
  bool vacuous = false;
  double delta = 0.0;          // y(0)
  double C1 = 0.0;             // integral form y <= delta + C1 t + C1 int (y + y^beta)
  double beta = 0.0;           // max(beta_1, 7/3)
  double T_pred = 0.0;
  double sup_y = 0.0;          // over [0, min(T_pred, t_end)]
  double energy = 0.0;         // sup y + int F over the same window
  bool small = false;          // sup_y <= 4 delta
};
PropagationSeries propagation_ode_monitor(const Trajectory &traj, double K, double m = 4.5,
                                          int max_cadence = 10);

// Exact audit of the critical barrier algebra with B = 8. Inputs are given through
// roots so that every power in the chain is rational: C2 = c2_root6^6,
// E0 = e0_root18^18, eta = eta_root4^4.
using Rational = boost::multiprecision::cpp_rational;
struct Step4Audit {
  Rational C1, C2, E0, eta, t, K;
  Rational eta_formula;          // max(64C2, 256C2^{4/3}, 8C2^{1/2}) max(...) with (1+K)
  bool eta_dominates = false;    // eta >= eta_formula
  bool terms_below_eighth = false;
  bool first_term_below_half = false;
  bool reduced_holds = false;    // 1 >= 8(C1+C2)E0^{2/3} + 8C2 E0^{2/3}(X - 1)
  bool chain_holds = false;      // B_{n+1} >= C1 B_n^{5/3} + C2 4^n X B_n^{5/3}, n < levels
  Rational min_chain_slack;      // min over n of B_{n+1} - rhs_n
};
Step4Audit audit_step4(const Rational &C1, const Rational &c2_root6,
                       const Rational &e0_root18, const Rational &eta_root4,
                       const Rational &t, const Rational &K, int levels);

std::string ladder_csv(const IterationLadder &L, const RecurrenceFit &fit);
std::string propagation_csv(const PropagationSeries &s);

} // namespace landau

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "landau/coefficients.hpp"
#include "landau/grid.hpp"
#include "landau/report.hpp"
#include "landau/solver.hpp"

namespace landau {

// Reproducible uniform [0,1) stream (splitmix-seeded xoroshiro128+, 53-bit mantissa).
class Random {
public:
  explicit Random(std::uint64_t seed);
  double uniform();
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

private:
  std::uint64_t state_[2];
  std::uint64_t next();
};

struct CorpusSample {
  std::string label;
  ScalarField f;
};

// Gaussians, Gaussian mixtures and <v - v0>^{-k} profiles, families interleaved
// so that the two halves used for stability see every family.
std::vector<CorpusSample> make_corpus(const VelocityGrid &g, std::uint64_t seed,
                                      int size = 50);

// Sharp constant of |u|_6^2 <= S_3 |grad u|_2^2 in R^3, S_3 = 1 / (3 (pi/2)^{4/3}).
double sobolev_constant();

InequalityReport check_weighted_sobolev(const std::vector<CorpusSample> &corpus,
                                        double k, std::uint64_t seed = 0);

// m = (2kp - (k-3)(3q-3p)) / (3p-q)
double interpolation_weight(double p, double q, double k);
InequalityReport check_interpolation(const std::vector<CorpusSample> &corpus, double p,
                                     double q, double k, std::uint64_t seed = 0);

struct PoincarePair {
  std::string label;
  ScalarField g;
  ScalarField phi;
};
std::vector<PoincarePair> make_poincare_pairs(const std::vector<CorpusSample> &corpus,
                                              std::uint64_t seed);

struct PoincareTerms {
  double lhs = 0.0;  // int <v>^{9/2} phi^2 g^{p+1}
  double grad = 0.0; // int <v>^{3/2} |grad(phi g^{p/2})|^2
  double norm = 0.0; // |g|_{L^q_{9/2}}^{2q/(2q-3)}, the eps-free part of the second term
  double mass = 0.0; // int <v>^{9/2} phi^2 g^p
};
PoincareTerms poincare_terms(const ScalarField &g, const ScalarField &phi, double p,
                             double q);

// Per-(sample, eps) ratios with the unknown constant set to 1, plus the
// eps-exponent of the optimal second-term constant (extra["eps_slope"]).
InequalityReport check_eps_poincare(const std::vector<PoincarePair> &pairs, double p,
                                    double q, const std::vector<double> &eps_grid,
                                    std::uint64_t seed = 0);

// Radial cutoff: phi(x) = (t(2 - x/R) / (t(2 - x/R) + t(x/R - 1)))^2, t(x) = exp(-1/x).
double cutoff_profile(double x, double R);
double cutoff_profile_derivative(double x, double R);
ScalarField cutoff_field(const VelocityGrid &g, double R, const double center[3]);

struct CutoffProfile {
  double R = 1.0;
  std::vector<double> x;
  std::vector<double> eta;
  std::vector<double> one_minus_eta; // 1 - eta without cancellation
  std::vector<double> grad; // |eta'|
  double C_hat = 0.0;       // max R|eta'| / min(sqrt(eta), sqrt(1 - eta))
  double C_sqrt_eta = 0.0;  // max R|eta'| / sqrt(eta)
  double C_sqrt_one_minus = 0.0;
  double C_loose = 0.0;     // max R|eta'| / max(sqrt(eta), sqrt(1 - eta))
};
CutoffProfile build_cutoff(double R, int mesh = 20001);

struct CutoffCheck {
  bool range = false;
  bool support = false;
  bool bound_sqrt_eta = false;
  bool bound_sqrt_one_minus = false;
  bool smooth = false;
  double max_second_difference = 0.0; // R^2 |eta''| estimated by second differences
  bool all() const {
    return range && support && bound_sqrt_eta && bound_sqrt_one_minus && smooth;
  }
};
CutoffCheck verify_cutoff(const CutoffProfile &c);

enum class BarrierRegime { Critical, Subcritical };

struct BarrierParams {
  double a = 0.0;
  double k = 0.0;
  double eta = 0.0;
  BarrierRegime regime = BarrierRegime::Critical;
  double n_weight = -6.0; // weight exponent of the monitored integral
};

// Critical: -(d/dt) bound of the weighted functional needs eta >= 3 C(n,k) M / 2 with
// C(n,k) = 2(n+k)^2 + 3k - 2n (Young with delta = |n| / (3|n+k|), tr A <= 3|A|).
double critical_barrier_constant(double n, double k);
double critical_sufficient_rate(double n, double k, double M);

struct SubcriticalRate {
  double C1_tilde = 0.0;   // k * sup tr A
  double C2_tilde = 0.0;   // k (k+2) * ellipticity floor
  double delta = 0.0;      // C2_tilde / C1_tilde
  double eta_young = 0.0;  // C1_tilde (5 / (2 delta))^{10/3}
  double eta = 0.0;        // sufficient value: max(eta_young, C1_tilde)
};
// Throws HypothesisError for k <= 5.
SubcriticalRate subcritical_sufficient_rate(double k, double trace_bound,
                                            double ellipticity_floor);

// Sup over a trajectory of t^{1/3} sup_A(t).
double measured_critical_M(const Trajectory &traj);

double barrier_time_factor(const BarrierParams &b, double t);
// max over nodes of (d_t psi - A : D^2 psi - f psi) / psi for psi = a T(t) <v>^{-k}.
double barrier_residual(const ScalarField &f, const CoefficientSet &cs,
                        const BarrierParams &b, double t);

struct MonitorSeries {
  std::vector<double> t;
  std::vector<double> integral;
  std::vector<double> min_ratio; // min f <v>^k / (a T(t))
  double tolerance = 0.0;
  double max_increase = 0.0;
  bool nonincreasing = false;
  bool invalid_hypothesis = false; // f_in below the barrier at t = 0
};
MonitorSeries minimum_principle_monitor(const Trajectory &traj, const BarrierParams &b);

} // namespace landau

#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "landau/coefficients.hpp"
#include "landau/grid.hpp"
#include "landau/report.hpp"
#include "landau/solver.hpp"

namespace landau {

struct DiagnosticsOptions {
  std::vector<std::pair<double, double>> lp_pairs{{1.5, 4.5}}; // (p, m)
  double f_floor = 1e-14;
  // Lower barrier a <v>^{-k}; min_f_ratio is reported when a > 0.
  double barrier_a = 0.0;
  double barrier_k = 0.0;
};

struct DiagnosticsRecord {
  double t = 0.0;
  double mass = 0.0;
  std::array<double, 3> momentum{};
  double energy = 0.0;
  double entropy = 0.0;
  double fisher = 0.0;
  double fisher_sqrt_form = 0.0;
  double linf = 0.0;
  std::vector<double> lp_norms; // aligned with DiagnosticsOptions::lp_pairs
  double c0_hat = 0.0;
  double sup_A = 0.0;
  double min_f_ratio = 0.0;
  double min_f = 0.0;
  bool zero_state = false;
  bool fisher_forms_differ = false; // the two Fisher forms differ by > 1%
};

DiagnosticsRecord record(const SimulationState &s, const DiagnosticsOptions &opt = {});
DiagnosticsRecord record_field(const ScalarField &f, double t, const CoefficientSet &cs,
                               const DiagnosticsOptions &opt = {});

double entropy(const ScalarField &f);
double fisher_information(const ScalarField &f, double f_floor = 1e-14);
double fisher_sqrt_form(const ScalarField &f);

std::string diagnostics_csv_header(const DiagnosticsOptions &opt);
std::string diagnostics_csv_row(const DiagnosticsRecord &r);

struct LevelSetWindow {
  double ell = 0.0;
  double p = 1.5;
  double m = 4.5;
  double T1 = 0.0;
  double T2 = 0.0;
  double A = 0.0; // max over snapshots of int <v>^m f_l^p
  double B = 0.0; // trapezoid in time of int <v>^{m-3} |grad f_l^{p/2}|^2
  double E = 0.0;
  std::size_t samples = 0;
};

// Spatial integrands of the level-set functionals for one field.
struct LevelSetIntegrals {
  double a = 0.0;
  double b = 0.0;
};
LevelSetIntegrals level_set_integrals(const ScalarField &f, double ell, double p,
                                      double m);

// Snapshots with T1 <= t <= T2 (up to round-off) form the window.
LevelSetWindow level_set_energy(const Trajectory &traj, double ell, double p, double m,
                                double T1, double T2);

double eps_regularity(const Trajectory &traj, double K, double T1, double T2);

struct SmoothingFit {
  double slope = 0.0;
  double sup_const = 0.0;
  double t_at_sup = 0.0;
  std::size_t used = 0;
};
// Fit window defaults to all snapshots with t > 0.
SmoothingFit smoothing_rate_fit(const Trajectory &traj, double p, double t_lo = 0.0,
                                double t_hi = -1.0);

InequalityReport moment_growth_check(const Trajectory &traj, double k);

struct EquilibriumDistance {
  double L1 = 0.0;
  double L2_m = 0.0;
  double Linf = 0.0;
};
ScalarField maxwellian(const VelocityGrid &g);
// Requires mass 1, momentum 0, energy 3 within `tol`.
EquilibriumDistance equilibrium_distance(const ScalarField &f, double m = 4.5,
                                         double tol = 1e-3);

} // namespace landau

#pragma once

#include <array>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "landau/coefficients.hpp"
#include "landau/grid.hpp"

namespace landau {

struct SimulationState {
  ScalarField f;
  double t = 0.0;
  CoefficientSet coeffs;
  long step_count = 0;
  double undershoot = 0.0;   // most negative value produced so far
  double clipped_mass = 0.0; // total mass removed by the positivity clip
  double last_dt = 0.0;
};

SimulationState make_state(ScalarField f, double t = 0.0);

struct StepControl {
  double cfl = 0.5;
  double dt_min = 1e-8;
  double dt_max = 0.25;
  bool positivity_clip = false;
};

void validate(const StepControl &c);

// Face-centred flux; axis a holds (n+1) faces along a, face q between cells q-1 and q.
struct FaceFlux {
  VelocityGrid grid;
  std::array<std::vector<double>, 3> c;

  explicit FaceFlux(const VelocityGrid &g);
  std::size_t face_index(int axis, int i, int j, int k) const;
};

FaceFlux flux(const ScalarField &f, const CoefficientSet &cs);
FaceFlux flux(const SimulationState &s);
ScalarField flux_divergence(const FaceFlux &F);

double stable_dt(const CoefficientSet &cs, double h, const StepControl &c);

// Heun step. dt_limit shortens the step (used to land on the final time).
SimulationState step(const SimulationState &s, const StepControl &c,
                     double dt_limit = std::numeric_limits<double>::infinity());

// Mass-preserving [1/4, 1/2, 1/4] smoothing per axis (single-cell scale).
ScalarField mollify(const ScalarField &f);

struct Snapshot {
  double t = 0.0;
  long step = 0;
  ScalarField f;
  double sup_A = 0.0;
  double c0_hat = 0.0;
};

struct Trajectory {
  VelocityGrid grid;
  std::vector<Snapshot> snapshots;
  std::vector<double> dts;
  long steps = 0;
  double undershoot = 0.0;
  double clipped_mass = 0.0;

  double t_end() const { return snapshots.empty() ? 0.0 : snapshots.back().t; }
};

struct RunOptions {
  std::vector<double> schedule;  // snapshot times (nearest step)
  long cadence = 0;              // additionally every `cadence` steps (0 = off)
  bool include_initial = false;
  std::string dump_path;         // NaN dump target; empty = no dump
  std::function<void(const SimulationState &)> observer; // called at t = 0 and after every step
};

Trajectory run(const ScalarField &f_in, double T, const StepControl &c,
               const RunOptions &opt = {});

namespace serial {
FaceFlux flux(const ScalarField &f, const CoefficientSet &cs);
ScalarField flux_divergence(const FaceFlux &F);
} // namespace serial

} // namespace landau

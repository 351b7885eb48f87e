#pragma once

#include <array>
#include <string>
#include <vector>

#include "landau/config.hpp"
#include "landau/grid.hpp"

namespace landau {

struct InitialData {
  ScalarField f;
  std::string family;
  // |discrete moment - target| after renormalization
  double mass_residual = 0.0;
  double momentum_residual = 0.0;
  double energy_residual = 0.0; // NaN when the energy is left alone
  double energy = 0.0;
  double tail_mass = 0.0; // share of the mass outside |v| <= l/2
  double barrier_a = 0.0; // min over nodes of f <v>^k, k from the config
  double barrier_k = 0.0;
  std::array<double, 3> center{};
  double scale = 1.0;
  int iterations = 0;
  std::vector<std::string> warnings;
};

// Samples the family as alpha F((v - u) / s) and iterates on (alpha, u, s) until
// the discrete mass is 1, the momentum 0 and the energy 3. A tail mass above 1e-4
// warns "domain too small"; above 1e-2 it throws ConfigError.
InitialData make_initial_data(const InitialDataConfig &c, const VelocityGrid &g);

} // namespace landau

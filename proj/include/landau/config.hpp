#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace landau {

struct GridConfig {
  int n = 64;
  double l = 8.0;
};

// family: maxwellian | bimaxwellian | narrow_gaussian | polytail | mixture
struct InitialDataConfig {
  std::string family = "maxwellian";
  std::optional<double> sigma; // family default when unset
  double drift = 1.2;          // bimaxwellian half-separation along v1
  double k = 10.0;             // polytail decay exponent
  double tail = 0.02;          // polytail tail amplitude relative to the core peak
  int components = 3;          // mixture
  std::uint64_t seed = 1;      // mixture
  std::optional<bool> normalize_energy; // off by default only for narrow_gaussian
};

struct RunConfig {
  double T = 1.0;
  double cfl = 0.5;
  double dt_min = 1e-8;
  double dt_max = 0.25;
  int snapshot_cadence = 50;
  bool positivity_clip = false;
  std::vector<double> schedule; // extra snapshot times
  std::string snapshots = "ends"; // all | ends | none
};

struct DiagnosticsConfig {
  std::vector<double> p_list{1.5};
  std::vector<double> m_list{4.5};
  double f_floor = 1e-14;
};

struct EpsRegularityConfig {
  bool enabled = false;
  double K = 0.0; // 0: half of the initial sup
};

struct LadderConfig {
  bool enabled = false;
  std::string regime = "critical";
  double K = 0.0;         // 0: taken from eps_regularity (critical) or 0 (subcritical)
  double amplitude = 0.0; // 0: sup of f over [t/2, T] minus K
  int N_levels = 8;
  double t = 0.0;         // 0: T/2
  double p = 0.0;         // 0: 3/2 critical, 2 subcritical
};

struct BarrierConfig {
  bool enabled = false;
  std::string regime = "critical";
  double a = 0.0; // 0: min over nodes of f_in <v>^k
  double k = 10.0;
  double n_weight = -6.0;
};

struct InequalitiesConfig {
  bool enabled = false;
  std::uint64_t corpus_seed = 1;
  int corpus_size = 50;
  int n = 48;
  double l = 8.0;
};

struct OutputConfig {
  std::string dir = "out";
};

struct ExperimentConfig {
  GridConfig grid;
  InitialDataConfig initial_data;
  RunConfig run;
  DiagnosticsConfig diagnostics;
  EpsRegularityConfig eps_regularity;
  LadderConfig ladder;
  BarrierConfig barrier;
  InequalitiesConfig inequalities;
  OutputConfig output;
};

// INI text with [section] headers and key = value lines; '#' and ';' start comments.
// An experiment section enables that experiment unless it sets enabled = false.
// Throws ConfigError naming the offending key.
ExperimentConfig parse_config(const std::string &text);
ExperimentConfig load_config(const std::string &path);

// Normalized key = value listing of every field, used in summaries.
std::string config_to_text(const ExperimentConfig &c);

} // namespace landau

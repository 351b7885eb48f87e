#pragma once

#include <cstdint>
#include <exception>
#include <ostream>
#include <string>
#include <vector>

#include "landau/config.hpp"
#include "landau/diagnostics.hpp"
#include "landau/inequalities.hpp"
#include "landau/report.hpp"

namespace landau {

// config = 2, numeric = 3, hypothesis = 4, anything else = 1.
int exit_code_for(const std::exception &e);

struct InequalitySuite {
  std::vector<InequalityReport> reports;
  CutoffProfile cutoff_unit;  // R = 1
  CutoffProfile cutoff_large; // R = 10
  CutoffCheck check_unit;
  CutoffCheck check_large;
  double cutoff_scale_deviation = 0.0; // |C_hat(1) - C_hat(10)|
  bool pass = false;
};
// Weighted Sobolev (k = 9/2), interpolation (3/2, 5/2, 9/2) and (3/2, 13/6, 9/2),
// eps-Poincare (p = q = 2) and the cutoff at R = 1 and R = 10.
InequalitySuite run_inequality_suite(const InequalitiesConfig &c);
std::string inequality_suite_summary(const InequalitySuite &s);

struct ExperimentOutcome {
  int exit_code = 0;
  std::string message;            // error text when exit_code != 0
  std::string summary;            // contents of summary.txt
  std::vector<std::string> files; // artifacts written, relative to the output dir
};

// Runs the solver and every enabled experiment, writing artifacts into
// config.output.dir. Errors are mapped to exit codes instead of thrown.
ExperimentOutcome run_experiment(const ExperimentConfig &c, std::ostream *log = nullptr);

DiagnosticsOptions diagnostics_options(const DiagnosticsConfig &c);

// diagnostics.csv text for a list of snapshot files.
std::string diagnose_snapshots(const std::vector<std::string> &paths,
                               const DiagnosticsOptions &opt);

struct ConvolveCheck {
  int n = 0;
  double max_rel_error = 0.0; // over the scalar and the six matrix components
  double fft_seconds = 0.0;
  double direct_seconds = 0.0;
};
ConvolveCheck convolve_check(int n, double l, std::uint64_t seed);

} // namespace landau

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace landau {

// Empirical ratios LHS / (RHS without its unknown constant).
// NaN marks a degenerate (0/0) sample, which is skipped in the statistics.
struct InequalityReport {
  std::string name;
  std::uint64_t seed = 0;
  std::vector<std::string> labels;
  std::vector<double> ratios;

  double max_ratio = 0.0;
  double max_first_half = 0.0;
  double max_second_half = 0.0;
  std::size_t degenerate = 0;
  double homogeneity_deviation = 0.0; // max relative change of a ratio under f -> c f
  bool pass = false;

  std::map<std::string, double> extra; // named scalars shown in the summary
  std::vector<std::string> notes;

  void add(std::string label, double ratio);
};

// Corpus statistics: pass iff the max ratio is finite and the two halves
// (even / odd sample positions) agree within `tolerance` relative.
void finalize_corpus(InequalityReport &r, double tolerance = 0.2);
// Single-field bound list: pass iff every non-degenerate ratio is finite and > 0.
void finalize_bounds(InequalityReport &r);

std::string report_csv(const InequalityReport &r);
std::string report_summary(const InequalityReport &r);

} // namespace landau

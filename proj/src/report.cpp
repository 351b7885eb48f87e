#include "landau/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "landau/format.hpp"

namespace landau {

void InequalityReport::add(std::string label, double ratio) {
  labels.push_back(std::move(label));
  ratios.push_back(ratio);
}

void finalize_corpus(InequalityReport &r, double tolerance) {
  r.max_ratio = r.max_first_half = r.max_second_half = 0.0;
  r.degenerate = 0;
  bool finite = true;
  for (std::size_t s = 0; s < r.ratios.size(); ++s) {
    double q = r.ratios[s];
    if (std::isnan(q)) {
      ++r.degenerate;
      continue;
    }
    if (!std::isfinite(q))
      finite = false;
    r.max_ratio = std::max(r.max_ratio, q);
    // interleaved halves so that each half sees every family of the corpus
    if (s % 2 == 0)
      r.max_first_half = std::max(r.max_first_half, q);
    else
      r.max_second_half = std::max(r.max_second_half, q);
  }
  double hi = std::max(r.max_first_half, r.max_second_half);
  double lo = std::min(r.max_first_half, r.max_second_half);
  bool stable = hi > 0.0 && (hi - lo) <= tolerance * hi;
  r.pass = finite && r.max_ratio > 0.0 && std::isfinite(r.max_ratio) && stable;
}

void finalize_bounds(InequalityReport &r) {
  r.max_ratio = 0.0;
  r.degenerate = 0;
  bool ok = true;
  std::size_t live = 0;
  for (double q : r.ratios) {
    if (std::isnan(q)) {
      ++r.degenerate;
      continue;
    }
    ++live;
    if (!std::isfinite(q) || !(q > 0.0))
      ok = false;
    r.max_ratio = std::max(r.max_ratio, q);
  }
  r.max_first_half = r.max_second_half = r.max_ratio;
  r.pass = ok && live > 0;
}

std::string report_csv(const InequalityReport &r) {
  std::ostringstream os;
  os << "# schema_version: 1\n";
  os << "sample,label,ratio\n";
  for (std::size_t s = 0; s < r.ratios.size(); ++s)
    os << s << ',' << r.labels[s] << ',' << fmt_double(r.ratios[s]) << '\n';
  return os.str();
}

std::string report_summary(const InequalityReport &r) {
  std::ostringstream os;
  os << "[" << r.name << "]\n";
  os << "seed = " << r.seed << "\n";
  os << "samples = " << r.ratios.size() << " (degenerate " << r.degenerate << ")\n";
  os << "max_ratio = " << fmt_double(r.max_ratio) << "\n";
  os << "max_ratio_half_a = " << fmt_double(r.max_first_half) << "\n";
  os << "max_ratio_half_b = " << fmt_double(r.max_second_half) << "\n";
  os << "homogeneity_deviation = " << fmt_double(r.homogeneity_deviation) << "\n";
  for (const auto &[k, v] : r.extra)
    os << k << " = " << fmt_double(v) << "\n";
  for (const auto &n : r.notes)
    os << "note: " << n << "\n";
  os << "pass = " << (r.pass ? "true" : "false") << "\n";
  return os.str();
}

} // namespace landau

#pragma once

#include <cstddef>
#include <vector>

namespace landau {

// Reads LANDAU_THREADS once and caps the OpenMP team size.
void configure_threads();
int max_threads();

// Deterministic reduction: per-slab partials computed in parallel, summed
// serially in slab order, so results do not depend on the thread count.
template <class F>
double slab_sum(int slabs, F &&partial) {
  std::vector<double> parts(static_cast<std::size_t>(slabs), 0.0);
#pragma omp parallel for schedule(static)
  for (int s = 0; s < slabs; ++s)
    parts[static_cast<std::size_t>(s)] = partial(s);
  double total = 0.0;
  for (double p : parts)
    total += p;
  return total;
}

template <class F>
double slab_max(int slabs, double init, F &&partial) {
  std::vector<double> parts(static_cast<std::size_t>(slabs), init);
#pragma omp parallel for schedule(static)
  for (int s = 0; s < slabs; ++s)
    parts[static_cast<std::size_t>(s)] = partial(s);
  double m = init;
  for (double p : parts)
    m = p > m ? p : m;
  return m;
}

} // namespace landau

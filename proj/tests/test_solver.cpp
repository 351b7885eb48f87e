#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "landau/diagnostics.hpp"
#include "landau/errors.hpp"
#include "landau/inequalities.hpp"
#include "landau/solver.hpp"

using namespace landau;

namespace {

ScalarField bump(const VelocityGrid &g, double cx, double s) {
  ScalarField f(g);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        const double x = g.node(i) - cx, y = g.node(j), z = g.node(k);
        f.at(i, j, k) = std::exp(-(x * x + y * y + z * z) / (2.0 * s * s));
      }
  return f;
}

ScalarField two_bumps(const VelocityGrid &g) {
  ScalarField f = bump(g, 1.2, 1.0), b = bump(g, -1.2, 1.0);
  for (std::size_t q = 0; q < g.size(); ++q)
    f[q] = (f[q] + b[q]) / (2.0 * std::pow(2.0 * std::numbers::pi, 1.5));
  return f;
}

ScalarField noisy(const VelocityGrid &g, std::uint64_t seed) {
  ScalarField f = two_bumps(g);
  Random rng(seed);
  for (double &v : f.values)
    v *= rng.uniform(0.5, 1.5);
  return f;
}

} // namespace

TEST_CASE("step control validation") {
  StepControl c;
  CHECK_NOTHROW(validate(c));
  c.cfl = 0.0;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c.cfl = 1.5;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = StepControl{};
  c.dt_min = 1.0;
  c.dt_max = 0.5;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
}

TEST_CASE("boundary faces carry no flux") {
  const VelocityGrid g = make_grid(12, 6.0);
  const ScalarField f = noisy(g, 2);
  const FaceFlux F = flux(f, compute_coefficients(f));
  for (int a = 0; a < 3; ++a)
    for (int u = 0; u < g.n; ++u)
      for (int w = 0; w < g.n; ++w) {
        // face q along axis a sits at position q of that axis
        const int lo[3] = {a == 0 ? 0 : u, a == 1 ? 0 : (a == 0 ? u : w), a == 2 ? 0 : w};
        const int hi[3] = {a == 0 ? g.n : u, a == 1 ? g.n : (a == 0 ? u : w),
                           a == 2 ? g.n : w};
        CHECK(F.c[a][F.face_index(a, lo[0], lo[1], lo[2])] == 0.0);
        CHECK(F.c[a][F.face_index(a, hi[0], hi[1], hi[2])] == 0.0);
      }
}

TEST_CASE("divergence of the face flux telescopes to zero mass change") {
  const VelocityGrid g = make_grid(12, 6.0);
  const ScalarField f = noisy(g, 4);
  const ScalarField d = flux_divergence(flux(f, compute_coefficients(f)));
  double s = 0.0, scale = 0.0;
  for (double v : d.values) {
    s += v;
    scale += std::abs(v);
  }
  CHECK(std::abs(s) <= 1e-13 * scale);
}

TEST_CASE("OpenMP kernels reproduce the serial reference") {
  const VelocityGrid g = make_grid(16, 6.0);
  const ScalarField f = noisy(g, 9);
  const CoefficientSet cs = compute_coefficients(f);
  const FaceFlux par = flux(f, cs), ser = serial::flux(f, cs);
  // entries can be cancellation-small, so compare against the sup norm
  auto rel_gap = [](const std::vector<double> &x, const std::vector<double> &y) {
    double gap = 0.0, scale = 0.0;
    for (std::size_t q = 0; q < x.size(); ++q) {
      gap = std::max(gap, std::abs(x[q] - y[q]));
      scale = std::max(scale, std::abs(y[q]));
    }
    return gap / scale;
  };
  for (int a = 0; a < 3; ++a)
    CHECK(rel_gap(par.c[a], ser.c[a]) <= 1e-13);
  CHECK(rel_gap(flux_divergence(par).values, serial::flux_divergence(ser).values) <= 1e-13);
}

TEST_CASE("time step respects the parabolic limit and the cap") {
  const ScalarField f = two_bumps(make_grid(16, 6.0));
  const CoefficientSet cs = compute_coefficients(f);
  StepControl c;
  c.dt_max = 1e6;
  const double h = f.grid.h;
  const double dt = stable_dt(cs, h, c);
  CHECK(dt == doctest::Approx(0.5 * h * h / (6.0 * cs.sup_A + h * cs.max_grad_a)));
  CHECK(stable_dt(cs, 0.5 * h, c) ==
        doctest::Approx(0.125 * h * h / (6.0 * cs.sup_A + 0.5 * h * cs.max_grad_a)));
  CHECK(stable_dt(cs, 0.5 * h, c) < 0.5 * dt);
  c.dt_max = 0.1 * dt;
  CHECK(stable_dt(cs, h, c) == c.dt_max);
  c.dt_min = 10.0 * dt;
  c.dt_max = 20.0 * dt;
  CHECK_THROWS_AS(stable_dt(cs, h, c), NumericError);
}

TEST_CASE("mass is conserved to round-off over many steps") {
  const ScalarField f = noisy(make_grid(12, 6.0), 1);
  const double m0 = integrate(f);
  double worst = 0.0, prev = m0;
  RunOptions opt;
  opt.observer = [&](const SimulationState &s) {
    const double m = integrate(s.f);
    worst = std::max(worst, std::abs(m - prev) / m0);
    prev = m;
  };
  const Trajectory tr = run(f, 2.0, StepControl{}, opt);
  CHECK(tr.steps > 5);
  CHECK(worst <= 1e-13);
}

TEST_CASE("snapshots follow the schedule and cadence") {
  const ScalarField f = two_bumps(make_grid(8, 6.0));
  StepControl c;
  c.dt_max = 0.1;
  RunOptions opt;
  opt.include_initial = true;
  opt.schedule = {0.45, 0.2};
  const Trajectory tr = run(f, 1.0, c, opt);
  REQUIRE(tr.snapshots.size() == 4);
  CHECK(tr.snapshots[0].t == 0.0);
  CHECK(tr.snapshots[1].t == doctest::Approx(0.2));
  CHECK(std::abs(tr.snapshots[2].t - 0.45) <= 0.05 + 1e-12);
  CHECK(tr.t_end() == doctest::Approx(1.0));
  CHECK(tr.steps == 10);
  CHECK(tr.dts.size() == 10u);

  RunOptions every;
  every.cadence = 3;
  const Trajectory t2 = run(f, 1.0, c, every);
  // steps 3, 6, 9 and the final state
  CHECK(t2.snapshots.size() == 4);
  CHECK(t2.snapshots[1].step == 6);
}

TEST_CASE("the Gaussian is close to stationary") {
  const VelocityGrid g = make_grid(24, 8.0);
  ScalarField mu = bump(g, 0.0, 1.0);
  const double m = integrate(mu);
  for (double &v : mu.values)
    v /= m;
  const Trajectory tr = run(mu, 1.0, StepControl{});
  const ScalarField &f = tr.snapshots.back().f;
  double diff = 0.0;
  for (std::size_t q = 0; q < g.size(); ++q)
    diff += std::abs(f[q] - mu[q]) * g.cell_volume();
  // the continuum solution does not move; what remains is discretization error
  CHECK(diff < 5e-3);
}

TEST_CASE("entropy decreases along a bimodal run") {
  const ScalarField f = two_bumps(make_grid(16, 8.0));
  std::vector<double> H;
  RunOptions opt;
  opt.observer = [&](const SimulationState &s) { H.push_back(entropy(s.f)); };
  StepControl c;
  c.dt_max = 0.1;
  run(f, 1.0, c, opt);
  for (std::size_t i = 1; i < H.size(); ++i)
    CHECK(H[i] <= H[i - 1] + 1e-12);
  CHECK(H.back() < H.front());
}

TEST_CASE("positivity clip bookkeeping") {
  const VelocityGrid g = make_grid(8, 4.0);
  ScalarField f = two_bumps(g);
  f.at(0, 0, 0) = -1e-6;
  StepControl c;
  c.positivity_clip = true;
  const SimulationState s = step(make_state(f), c);
  CHECK(min_value(s.f) >= 0.0);
  CHECK(s.clipped_mass >= 0.0);
  CHECK(s.step_count == 1);
}

TEST_CASE("non-finite data is rejected") {
  ScalarField f = two_bumps(make_grid(8, 4.0));
  f.at(1, 1, 1) = std::nan("");
  CHECK_THROWS_AS(run(f, 1.0, StepControl{}), NumericError);
}

TEST_CASE("mollifier keeps the mass") {
  const ScalarField f = noisy(make_grid(8, 4.0), 3);
  const ScalarField m = mollify(f);
  CHECK(integrate(m) == doctest::Approx(integrate(f)).epsilon(1e-14));
  CHECK(max_value(m) <= max_value(f));
}

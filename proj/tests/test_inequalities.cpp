#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>

#include "landau/diagnostics.hpp"
#include "landau/errors.hpp"
#include "landau/inequalities.hpp"
#include "landau/solver.hpp"

using namespace landau;

namespace {

constexpr double kPi = std::numbers::pi;

long finite_count(const std::vector<double> &v) {
  return std::count_if(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

ScalarField gaussian(const VelocityGrid &g, double s, double cx = 0.0) {
  ScalarField f(g);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        const double x = g.node(i) - cx, y = g.node(j), z = g.node(k);
        f.at(i, j, k) = std::exp(-(x * x + y * y + z * z) / (2.0 * s * s));
      }
  return f;
}

std::vector<CorpusSample> gaussians(const VelocityGrid &g) {
  std::vector<CorpusSample> c;
  for (double s : {0.8, 1.0, 1.2, 1.4})
    c.push_back({"gauss", gaussian(g, s)});
  return c;
}

// Composite Simpson rule on [0, b] with N (even) panels.
template <class F>
double simpson(F f, double b, int N) {
  const double h = b / N;
  double s = f(0.0) + f(b);
  for (int i = 1; i < N; ++i)
    s += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return s * h / 3.0;
}

} // namespace

TEST_CASE("random stream is reproducible and in range") {
  Random a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    differs = differs || x != c.uniform();
  }
  CHECK(differs);
}

TEST_CASE("corpus interleaves families and is seed-determined") {
  const VelocityGrid g = make_grid(8, 6.0);
  const auto a = make_corpus(g, 7, 12), b = make_corpus(g, 7, 12);
  REQUIRE(a.size() == 12);
  std::set<std::string> first_half, second_half;
  for (std::size_t s = 0; s < a.size(); ++s) {
    CHECK(a[s].label == b[s].label);
    CHECK(a[s].f.values == b[s].f.values);
    const std::string fam = a[s].label.substr(0, 5);
    (s % 2 ? second_half : first_half).insert(fam);
  }
  CHECK(first_half.size() == 3);
  CHECK(first_half == second_half);
}

TEST_CASE("Sobolev constant") {
  CHECK(sobolev_constant() == doctest::Approx(1.0 / (3.0 * std::pow(kPi / 2.0, 4.0 / 3.0))));
}

TEST_CASE("weighted Sobolev at k = 3 on Gaussians") {
  // k = 3: plain Sobolev, so every ratio sits below the sharp constant's scale
  const VelocityGrid g = make_grid(24, 8.0);
  auto corpus = gaussians(g);
  corpus.push_back({"zero", ScalarField(g)});
  const InequalityReport r = check_weighted_sobolev(corpus, 3.0);
  // the zero sample is recorded as NaN and counted as degenerate
  CHECK(r.degenerate == 1);
  CHECK(finite_count(r.ratios) == 4);
  CHECK(r.max_ratio <= 1.05 * sobolev_constant());
  CHECK(r.homogeneity_deviation < 1e-12);
  CHECK_THROWS_AS(check_weighted_sobolev(corpus, 2.5), std::invalid_argument);
}

TEST_CASE("interpolation weight") {
  CHECK(interpolation_weight(1.5, 2.5, 4.5) == doctest::Approx(4.5));
  CHECK(interpolation_weight(1.5, 13.0 / 6.0, 4.5) == doctest::Approx(4.5));
  // (2kp - (k-3)(3q-3p)) / (3p-q) at p = 2, q = 3, k = 5
  CHECK(interpolation_weight(2.0, 3.0, 5.0) == doctest::Approx((20.0 - 2.0 * 3.0) / 3.0));
}

TEST_CASE("interpolation ratios are finite and scale-free") {
  const VelocityGrid g = make_grid(24, 8.0);
  const auto corpus = gaussians(g);
  for (double q : {2.5, 13.0 / 6.0}) {
    const InequalityReport r = check_interpolation(corpus, 1.5, q, 4.5);
    CHECK(r.ratios.size() == 4);
    for (double v : r.ratios) {
      CHECK(std::isfinite(v));
      CHECK(v > 0.0);
    }
    CHECK(r.homogeneity_deviation < 1e-10);
  }
  CHECK_THROWS_AS(check_interpolation(corpus, 1.5, 4.5, 4.5), std::invalid_argument);
  CHECK_THROWS_AS(check_interpolation(corpus, 2.0, 1.5, 4.5), std::invalid_argument);
}

TEST_CASE("eps-Poincare terms against radial quadrature") {
  const VelocityGrid g = make_grid(48, 8.0);
  const ScalarField G = gaussian(g, 1.0);
  const ScalarField one(g, 1.0);
  const PoincareTerms t = poincare_terms(G, one, 2.0, 2.0);
  auto radial = [](double power, double weight) {
    return 4.0 * kPi * simpson([&](double r) {
      return r * r * std::pow(1.0 + r * r, 0.5 * weight) * std::exp(-power * r * r / 2.0);
    }, 12.0, 4000);
  };
  CHECK(t.lhs == doctest::Approx(radial(3.0, 4.5)).epsilon(1e-8));
  CHECK(t.mass == doctest::Approx(radial(2.0, 4.5)).epsilon(1e-8));
  // norm = (int <v>^{9/2} g^2)^{2/(2q-3)} = (...)^2 at q = 2
  CHECK(t.norm == doctest::Approx(std::pow(radial(2.0, 4.5), 2.0)).epsilon(1e-8));
  CHECK(t.grad > 0.0);
}

TEST_CASE("eps-Poincare: finite ratios, degenerate zero and slope") {
  const VelocityGrid g = make_grid(24, 8.0);
  std::vector<PoincarePair> pairs;
  for (double s : {0.9, 1.2})
    pairs.push_back({"phi1", gaussian(g, s), ScalarField(g, 1.0)});
  pairs.push_back({"zero", ScalarField(g), ScalarField(g, 1.0)});
  const InequalityReport r = check_eps_poincare(pairs, 2.0, 2.0, {1e-2, 1e-1, 1.0});
  CHECK(r.degenerate == 3); // the zero pair at each eps
  CHECK(finite_count(r.ratios) == 6);
  REQUIRE(r.extra.count("eps_slope") == 1);
  CHECK(r.extra.at("eps_slope") == doctest::Approx(-3.0).epsilon(0.1 / 3.0));
  CHECK_THROWS_AS(check_eps_poincare(pairs, 2.0, 1.5, {0.1}), std::invalid_argument);
  CHECK_THROWS_AS(check_eps_poincare(pairs, 2.0, 2.0, {0.0}), std::invalid_argument);
}

TEST_CASE("eps-Poincare weighted terms only see the support of phi") {
  const VelocityGrid g = make_grid(24, 8.0);
  const double center[3] = {0.0, 0.0, 0.0};
  const ScalarField phi = cutoff_field(g, 1.5, center);
  const ScalarField G = gaussian(g, 1.0);
  ScalarField H = G;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k)
        if (std::hypot(g.node(i), g.node(j), g.node(k)) > 3.5)
          H.at(i, j, k) += 0.1;
  const PoincareTerms a = poincare_terms(G, phi, 2.0, 2.0);
  const PoincareTerms b = poincare_terms(H, phi, 2.0, 2.0);
  CHECK(a.lhs == b.lhs);
  CHECK(a.mass == b.mass);
  CHECK(a.norm != b.norm);
}

TEST_CASE("cutoff profile construction") {
  for (double R : {1.0, 10.0}) {
    CHECK(cutoff_profile(0.0, R) == 1.0);
    CHECK(cutoff_profile(R, R) == 1.0);
    CHECK(cutoff_profile(2.0 * R, R) == 0.0);
    CHECK(cutoff_profile(3.0 * R, R) == 0.0);
    double prev = 1.0;
    for (int i = 0; i <= 1000; ++i) {
      const double v = cutoff_profile(R * (1.0 + i / 1000.0), R);
      CHECK(v <= prev);
      prev = v;
    }
    // derivative against a centred difference
    const double x = 1.37 * R, d = 1e-6 * R;
    CHECK(cutoff_profile_derivative(x, R) ==
          doctest::Approx((cutoff_profile(x + d, R) - cutoff_profile(x - d, R)) / (2.0 * d))
              .epsilon(1e-6));
  }
  CHECK_THROWS_AS(build_cutoff(0.0), std::invalid_argument);
}

TEST_CASE("cutoff constant is scale invariant and bounds the gradient") {
  const CutoffProfile a = build_cutoff(1.0), b = build_cutoff(10.0);
  CHECK(std::abs(a.C_hat - b.C_hat) <= 1e-10);
  CHECK(std::isfinite(a.C_hat));
  CHECK(a.C_loose <= a.C_hat);
  CHECK(verify_cutoff(a).all());
  CHECK(verify_cutoff(b).all());
  // independent mesh maximization of R |eta'| / min(sqrt(eta), sqrt(1 - eta))
  double worst = 0.0;
  for (int i = 1; i < 20000; ++i) {
    const double x = 1.0 + i / 20000.0;
    const double e = cutoff_profile(x, 1.0);
    const double den = std::min(std::sqrt(e), std::sqrt(1.0 - e));
    if (den > 0.0)
      worst = std::max(worst, std::abs(cutoff_profile_derivative(x, 1.0)) / den);
  }
  CHECK(worst <= a.C_hat * (1.0 + 1e-9));
  CHECK(worst >= 0.99 * a.C_hat);
}

TEST_CASE("barrier rates") {
  CHECK(critical_barrier_constant(-6.0, 10.0) == doctest::Approx(74.0));
  const double r1 = critical_sufficient_rate(-6.0, 10.0, 0.1);
  CHECK(r1 == doctest::Approx(1.5 * 74.0 * 0.1));
  CHECK(critical_sufficient_rate(-6.0, 10.0, 0.2) == doctest::Approx(2.0 * r1));
  CHECK_THROWS_AS(critical_sufficient_rate(-2.0, 10.0, 0.1), std::invalid_argument);

  const SubcriticalRate s = subcritical_sufficient_rate(10.0, 0.05, 0.002);
  CHECK(s.C1_tilde == doctest::Approx(10.0 * 0.05));
  CHECK(s.C2_tilde == doctest::Approx(10.0 * 12.0 * 0.002));
  CHECK(s.eta == doctest::Approx(std::max(s.eta_young, s.C1_tilde)));
  // C1 doubled raises the rate
  CHECK(subcritical_sufficient_rate(10.0, 0.10, 0.002).eta > s.eta);
  CHECK_THROWS_AS(subcritical_sufficient_rate(5.0, 0.05, 0.002), HypothesisError);
  CHECK_THROWS_AS(subcritical_sufficient_rate(4.0, 0.05, 0.002), HypothesisError);
}

TEST_CASE("minimum principle monitor on a near-Maxwellian run") {
  // a small power tail keeps the far field well above round-off
  const VelocityGrid g = make_grid(16, 8.0);
  ScalarField mu = maxwellian(g);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        const double r2 = g.node(i) * g.node(i) + g.node(j) * g.node(j) + g.node(k) * g.node(k);
        mu.at(i, j, k) += 1e-3 * japanese_pow(r2, -6.0);
      }
  RunOptions opt;
  opt.include_initial = true;
  opt.cadence = 1;
  StepControl c;
  c.dt_max = 0.1;
  const Trajectory tr = run(mu, 0.5, c, opt);

  double sup_a = 0.0, floor = std::numeric_limits<double>::infinity();
  std::vector<CoefficientSet> cs;
  for (const auto &s : tr.snapshots) {
    cs.push_back(compute_coefficients(s.f));
    sup_a = std::max(sup_a, max_value(cs.back().a));
    floor = std::min(floor, cs.back().c0_hat);
  }

  BarrierParams b;
  b.k = 6.0;
  b.regime = BarrierRegime::Subcritical;
  b.eta = subcritical_sufficient_rate(b.k, sup_a, floor).eta;
  double a = std::numeric_limits<double>::infinity();
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        const double r2 = g.node(i) * g.node(i) + g.node(j) * g.node(j) + g.node(k) * g.node(k);
        a = std::min(a, mu.at(i, j, k) * japanese_pow(r2, b.k));
      }

  SUBCASE("barrier strictly below the data: integral identically zero") {
    b.a = 0.5 * a;
    const MonitorSeries m = minimum_principle_monitor(tr, b);
    for (double v : m.integral)
      CHECK(v == 0.0);
    CHECK(m.nonincreasing);
    CHECK_FALSE(m.invalid_hypothesis);
  }
  SUBCASE("barrier above the data is flagged") {
    b.a = 10.0 * a;
    const MonitorSeries m = minimum_principle_monitor(tr, b);
    CHECK(m.invalid_hypothesis);
    CHECK(m.min_ratio.front() == doctest::Approx(0.1));
  }
  SUBCASE("pointwise residual is nonpositive with the sufficient rate") {
    b.a = a;
    for (std::size_t i = 1; i < tr.snapshots.size(); ++i)
      CHECK(barrier_residual(tr.snapshots[i].f, cs[i], b, tr.snapshots[i].t) <= 0.0);
  }
  b.n_weight = -3.0;
  CHECK_THROWS_AS(minimum_principle_monitor(tr, b), std::invalid_argument);
}

TEST_CASE("barrier time factors") {
  BarrierParams b;
  b.eta = 2.0;
  b.regime = BarrierRegime::Critical;
  CHECK(barrier_time_factor(b, 8.0) == doctest::Approx(std::exp(-2.0 * 4.0)));
  b.regime = BarrierRegime::Subcritical;
  CHECK(barrier_time_factor(b, 0.5) == doctest::Approx(std::exp(-1.0)));
}

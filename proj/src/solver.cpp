#include "landau/solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "landau/errors.hpp"

namespace landau {

SimulationState make_state(ScalarField f, double t) {
  SimulationState s;
  s.coeffs = CoefficientEngine::for_grid(f.grid)->compute_unchecked(f);
  s.undershoot = std::min(0.0, min_value(f));
  s.f = std::move(f);
  s.t = t;
  return s;
}

void validate(const StepControl &c) {
  if (!(c.cfl > 0.0 && c.cfl <= 1.0))
    throw std::invalid_argument("cfl must lie in (0, 1]");
  if (!(c.dt_min > 0.0) || !(c.dt_min <= c.dt_max))
    throw std::invalid_argument("dt_min must be positive and not exceed dt_max");
}

FaceFlux::FaceFlux(const VelocityGrid &g) : grid(g) {
  const std::size_t count = static_cast<std::size_t>(g.n + 1) * g.n * g.n;
  for (auto &v : c)
    v.assign(count, 0.0);
}

std::size_t FaceFlux::face_index(int axis, int i, int j, int k) const {
  const std::size_t n = static_cast<std::size_t>(grid.n);
  if (axis == 0)
    return (static_cast<std::size_t>(i) * n + j) * n + k;
  if (axis == 1)
    return (static_cast<std::size_t>(i) * (n + 1) + j) * n + k;
  return (static_cast<std::size_t>(i) * n + j) * (n + 1) + k;
}

namespace {

std::size_t cell_stride(const VelocityGrid &g, int a) {
  return a == 0 ? static_cast<std::size_t>(g.n) * g.n
                : (a == 1 ? static_cast<std::size_t>(g.n) : 1);
}

} // namespace

FaceFlux flux(const ScalarField &f, const CoefficientSet &cs) {
  const auto &g = f.grid;
  const int n = g.n;
  const double h = g.h;
  FaceFlux F(g);
  const VectorField df = gradient(f);
  const auto &A = cs.A.c;
  const auto &ga = cs.grad_a.c;
  const auto &fv = f.values;

  for (int a = 0; a < 3; ++a) {
    const std::size_t s = cell_stride(g, a);
    auto &out = F.c[static_cast<std::size_t>(a)];
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const int q = a == 0 ? i : (a == 1 ? j : k);
          if (q == 0)
            continue; // boundary faces stay zero
          const std::size_t R = g.index(i, j, k);
          const std::size_t L = R - s;
          double acc = 0.0;
          for (int b = 0; b < 3; ++b) {
            const std::size_t slot = static_cast<std::size_t>(sym_slot(a, b));
            const double Abar = 0.5 * (A[slot][L] + A[slot][R]);
            const double dfb =
                b == a ? (fv[R] - fv[L]) / h : 0.5 * (df.c[b][L] + df.c[b][R]);
            acc += Abar * dfb;
          }
          acc -= 0.5 * (ga[a][L] + ga[a][R]) * 0.5 * (fv[L] + fv[R]);
          out[F.face_index(a, i, j, k)] = acc;
        }
  }
  return F;
}

FaceFlux flux(const SimulationState &s) { return flux(s.f, s.coeffs); }

ScalarField flux_divergence(const FaceFlux &F) {
  const auto &g = F.grid;
  const int n = g.n;
  const double inv_h = 1.0 / g.h;
  ScalarField out(g);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double d = (F.c[0][F.face_index(0, i + 1, j, k)] -
                          F.c[0][F.face_index(0, i, j, k)]) +
                         (F.c[1][F.face_index(1, i, j + 1, k)] -
                          F.c[1][F.face_index(1, i, j, k)]) +
                         (F.c[2][F.face_index(2, i, j, k + 1)] -
                          F.c[2][F.face_index(2, i, j, k)]);
        out.at(i, j, k) = d * inv_h;
      }
  return out;
}

double stable_dt(const CoefficientSet &cs, double h, const StepControl &c) {
  const double denom = 6.0 * cs.sup_A + h * cs.max_grad_a;
  if (!(denom > 0.0))
    return c.dt_max;
  double dt = c.cfl * h * h / denom;
  if (dt < c.dt_min) {
    std::ostringstream os;
    os << "stiffness: stable dt " << dt << " below dt_min " << c.dt_min;
    throw NumericError(os.str());
  }
  return std::min(dt, c.dt_max);
}

namespace {

void clip_positive(ScalarField &f, double &clipped) {
  double before = integrate(f);
  double removed = 0.0;
  for (double &v : f.values)
    if (v < 0.0) {
      removed -= v;
      v = 0.0;
    }
  if (removed == 0.0)
    return;
  double after = integrate(f);
  if (after > 0.0) {
    const double scale = before / after;
    for (double &v : f.values)
      v *= scale;
  }
  clipped += removed * f.grid.cell_volume();
}

} // namespace

SimulationState step(const SimulationState &s, const StepControl &c, double dt_limit) {
  const auto engine = CoefficientEngine::for_grid(s.f.grid);
  double dt = stable_dt(s.coeffs, s.f.grid.h, c);
  dt = std::min(dt, dt_limit);

  const ScalarField k1 = flux_divergence(flux(s.f, s.coeffs));
  ScalarField f1(s.f.grid);
  const std::size_t N = f1.values.size();
  for (std::size_t q = 0; q < N; ++q)
    f1.values[q] = s.f.values[q] + dt * k1.values[q];
  const CoefficientSet c1 = engine->compute_unchecked(f1);
  const ScalarField k2 = flux_divergence(flux(f1, c1));

  SimulationState out;
  out.f = ScalarField(s.f.grid);
  for (std::size_t q = 0; q < N; ++q)
    out.f.values[q] = s.f.values[q] + 0.5 * dt * (k1.values[q] + k2.values[q]);
  out.t = s.t + dt;
  out.step_count = s.step_count + 1;
  out.last_dt = dt;
  out.clipped_mass = s.clipped_mass;
  out.undershoot = std::min(s.undershoot, min_value(out.f));
  if (c.positivity_clip)
    clip_positive(out.f, out.clipped_mass);
  out.coeffs = engine->compute_unchecked(out.f);
  return out;
}

ScalarField mollify(const ScalarField &f) {
  ScalarField cur = f;
  const auto &g = f.grid;
  const int n = g.n;
  for (int a = 0; a < 3; ++a) {
    ScalarField next(g);
    const std::size_t s = cell_stride(g, a);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const int q = a == 0 ? i : (a == 1 ? j : k);
          const std::size_t c = g.index(i, j, k);
          const double v = cur.values[c];
          next.values[c] += 0.5 * v;
          // mass that would leave the box stays in the boundary cell
          next.values[q > 0 ? c - s : c] += 0.25 * v;
          next.values[q < n - 1 ? c + s : c] += 0.25 * v;
        }
    cur = std::move(next);
  }
  return cur;
}

namespace {

bool all_finite(const ScalarField &f) {
  for (double v : f.values)
    if (!std::isfinite(v))
      return false;
  return true;
}

Snapshot snapshot_of(const SimulationState &s) {
  return Snapshot{s.t, s.step_count, s.f, s.coeffs.sup_A, s.coeffs.c0_hat};
}

} // namespace

Trajectory run(const ScalarField &f_in, double T, const StepControl &c,
               const RunOptions &opt) {
  validate(c);
  if (!(T >= 0.0))
    throw std::invalid_argument("T must be nonnegative");
  if (!all_finite(f_in))
    throw NumericError("initial data contains non-finite values");

  Trajectory traj;
  traj.grid = f_in.grid;
  std::map<long, Snapshot> kept; // keyed by step index, ordered in time

  std::vector<double> sched = opt.schedule;
  std::sort(sched.begin(), sched.end());
  std::size_t next_sched = 0;

  SimulationState cur = make_state(f_in, 0.0);
  if (opt.observer)
    opt.observer(cur);
  if (opt.include_initial)
    kept.emplace(0, snapshot_of(cur));
  while (next_sched < sched.size() && sched[next_sched] <= 0.0) {
    kept.emplace(0, snapshot_of(cur));
    ++next_sched;
  }

  const double eps_t = 1e-12 * std::max(1.0, T);
  while (cur.t < T - eps_t) {
    SimulationState nxt = step(cur, c, T - cur.t);
    if (!all_finite(nxt.f)) {
      if (!opt.dump_path.empty())
        write_snapshot(opt.dump_path, cur.f, cur.t);
      std::ostringstream os;
      os << "non-finite values after step " << nxt.step_count << " at t=" << nxt.t;
      if (!opt.dump_path.empty())
        os << " (last finite state dumped to " << opt.dump_path << ")";
      throw NumericError(os.str());
    }
    traj.dts.push_back(nxt.last_dt);
    while (next_sched < sched.size() && sched[next_sched] <= nxt.t) {
      const double s = sched[next_sched];
      const bool prev_closer = (s - cur.t) < (nxt.t - s);
      if (prev_closer)
        kept.emplace(cur.step_count, snapshot_of(cur));
      else
        kept.emplace(nxt.step_count, snapshot_of(nxt));
      ++next_sched;
    }
    if (opt.cadence > 0 && nxt.step_count % opt.cadence == 0)
      kept.emplace(nxt.step_count, snapshot_of(nxt));
    if (opt.observer)
      opt.observer(nxt);
    cur = std::move(nxt);
  }
  kept.emplace(cur.step_count, snapshot_of(cur));

  traj.steps = cur.step_count;
  traj.undershoot = cur.undershoot;
  traj.clipped_mass = cur.clipped_mass;
  for (auto &[k, snap] : kept)
    traj.snapshots.push_back(std::move(snap));
  return traj;
}

namespace serial {

FaceFlux flux(const ScalarField &f, const CoefficientSet &cs) {
  const auto &g = f.grid;
  const int n = g.n;
  const double h = g.h;
  FaceFlux F(g);
  // transverse derivatives from plain central differences at the two cells
  auto central = [&](int i, int j, int k, int b) {
    int idx[3] = {i, j, k};
    int lo[3] = {i, j, k}, hi[3] = {i, j, k};
    if (idx[b] == 0) {
      int p1[3] = {i, j, k}, p2[3] = {i, j, k};
      p1[b] += 1;
      p2[b] += 2;
      return (-3.0 * f.at(i, j, k) + 4.0 * f.at(p1[0], p1[1], p1[2]) -
              f.at(p2[0], p2[1], p2[2])) /
             (2.0 * h);
    }
    if (idx[b] == n - 1) {
      int m1[3] = {i, j, k}, m2[3] = {i, j, k};
      m1[b] -= 1;
      m2[b] -= 2;
      return (3.0 * f.at(i, j, k) - 4.0 * f.at(m1[0], m1[1], m1[2]) +
              f.at(m2[0], m2[1], m2[2])) /
             (2.0 * h);
    }
    lo[b] -= 1;
    hi[b] += 1;
    return (f.at(hi[0], hi[1], hi[2]) - f.at(lo[0], lo[1], lo[2])) / (2.0 * h);
  };
  for (int a = 0; a < 3; ++a)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          int R[3] = {i, j, k};
          if (R[a] == 0)
            continue;
          int L[3] = {i, j, k};
          L[a] -= 1;
          const std::size_t qL = g.index(L[0], L[1], L[2]);
          const std::size_t qR = g.index(R[0], R[1], R[2]);
          double acc = 0.0;
          for (int b = 0; b < 3; ++b) {
            const double Abar = 0.5 * (cs.A.entry(qL, a, b) + cs.A.entry(qR, a, b));
            double dfb;
            if (b == a)
              dfb = (f.values[qR] - f.values[qL]) / h;
            else
              dfb = 0.5 * (central(L[0], L[1], L[2], b) + central(R[0], R[1], R[2], b));
            acc += Abar * dfb;
          }
          const double gbar = 0.5 * (cs.grad_a.c[a][qL] + cs.grad_a.c[a][qR]);
          acc -= gbar * 0.5 * (f.values[qL] + f.values[qR]);
          F.c[a][F.face_index(a, i, j, k)] = acc;
        }
  return F;
}

ScalarField flux_divergence(const FaceFlux &F) {
  const auto &g = F.grid;
  const int n = g.n;
  ScalarField out(g);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double d = 0.0;
        d += F.c[0][F.face_index(0, i + 1, j, k)] - F.c[0][F.face_index(0, i, j, k)];
        d += F.c[1][F.face_index(1, i, j + 1, k)] - F.c[1][F.face_index(1, i, j, k)];
        d += F.c[2][F.face_index(2, i, j, k + 1)] - F.c[2][F.face_index(2, i, j, k)];
        out.at(i, j, k) = d / g.h;
      }
  return out;
}

} // namespace serial

} // namespace landau

#include "morph/evolve.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace morph {

namespace {

// Solves (1 + dt*coef - dt*diff*Lap) u = rhs with the mirrored-ghost Neumann
// closure. Row-diagonally-dominant M-matrix: the Thomas sweep needs no
// pivoting, its pivots stay above 1 + dt*coef, and for nonnegative rhs
// every quantity on the solution path is a sum of nonnegative terms, so the
// result is nonnegative to the last bit.
Field implicit_species_solve(const Field& rhs, const Field& coef, double dt, double diff,
                             const Grid& g) {
  const int n = g.n;
  const double k = dt * diff / (g.h * g.h);
  std::vector<double> cp(n);  // modified super-diagonal
  Field u(n + 1);

  double denom = 1.0 + dt * coef[0] + 2.0 * k;
  cp[0] = -2.0 * k / denom;
  u[0] = rhs[0] / denom;
  for (int j = 1; j <= n; ++j) {
    const double sub = (j == n) ? -2.0 * k : -k;
    denom = 1.0 + dt * coef[j] + 2.0 * k - sub * cp[j - 1];
    const double r = rhs[j] - sub * u[j - 1];
    if (j < n) cp[j] = -k / denom;
    u[j] = r / denom;
  }
  for (int j = n - 1; j >= 0; --j) u[j] -= cp[j] * u[j + 1];
  return u;
}

void check_state(const State& s, const Grid& g) {
  for (const Field& f : s.u) {
    if (static_cast<int>(f.size()) != g.num_nodes()) {
      throw std::invalid_argument("evolve: state field size does not match grid");
    }
  }
}

double min_value(const std::array<Field, 5>& u) {
  double m = 0.0;
  for (const Field& f : u) {
    for (double x : f) m = std::min(m, x);
  }
  return m;
}

double envelope(double t0, double t, double decay, double initial, double production) {
  const double e = std::exp(-decay * (t - t0));
  return e * initial + production * (1.0 - e) / decay;
}

Snapshot make_snapshot(const State& s, const Params& p, const Grid& g, double t0,
                       double sup0, double l1sum0, const SteadySolution* ref) {
  Snapshot snap;
  snap.t = s.t;
  snap.u = s.u;
  double sup = 0.0;
  for (int j = 0; j < g.num_nodes(); ++j) {
    sup = std::max(sup, s.u[2][j] + s.u[3][j] + s.u[4][j]);
  }
  snap.sup_345 = sup;
  snap.l1_1245 = {l1_norm(s.u[0], g), l1_norm(s.u[1], g), l1_norm(s.u[3], g),
                  l1_norm(s.u[4], g)};
  snap.bound_sup = envelope(t0, s.t, p.b_min(), sup0, p.p3());
  snap.bound_l1 = envelope(t0, s.t, p.b_min(), l1sum0, p.p1());
  if (ref != nullptr) {
    snap.has_ref = true;
    double dist = 0.0;
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < g.num_nodes(); ++j) {
        dist = std::max(dist, std::abs(s.u[i][j] - ref->u[i][j]));
      }
    }
    snap.dist_to_ref = dist;
  }
  return snap;
}

}  // namespace

State imex_step(const State& s, double dt, const Params& p, const Grid& g) {
  if (!(dt > 0.0)) throw std::invalid_argument("imex_step: dt must be positive");
  check_state(s, g);
  const int m = g.num_nodes();
  const Field delta = discrete_delta(g);
  const Field& u1 = s.u[0];
  const Field& u2 = s.u[1];
  const Field& u3 = s.u[2];
  const Field& u4 = s.u[3];
  const Field& u5 = s.u[4];

  Field rhs(m), coef(m);
  State next;
  next.t = s.t + dt;

  for (int j = 0; j < m; ++j) {
    rhs[j] = u1[j] + dt * (p.c2() * u2[j] + p.c4() * u4[j] + p.p1() * delta[j]);
    coef[j] = p.b1() + p.c1() + u3[j];
  }
  next.u[0] = implicit_species_solve(rhs, coef, dt, 1.0, g);

  for (int j = 0; j < m; ++j) {
    rhs[j] = u2[j] + dt * (p.c1() * u1[j] + p.c5() * u5[j]);
    coef[j] = p.b2() + p.c2() + p.c3() * u3[j];
  }
  next.u[1] = implicit_species_solve(rhs, coef, dt, p.d(), g);

  next.u[2].resize(m);
  next.u[3].resize(m);
  next.u[4].resize(m);
  for (int j = 0; j < m; ++j) {
    next.u[2][j] = (u3[j] + dt * (p.c4() * u4[j] + p.c5() * u5[j] + p.p3())) /
                   (1.0 + dt * (p.b3() + u1[j] + p.c3() * u2[j]));
    next.u[3][j] = (u4[j] + dt * u1[j] * u3[j]) / (1.0 + dt * (p.b4() + p.c4()));
    next.u[4][j] = (u5[j] + dt * p.c3() * u2[j] * u3[j]) /
                   (1.0 + dt * (p.b5() + p.c5()));
  }

  const double mn = min_value(next.u);
  if (mn < -1e-12) {
    throw std::runtime_error("imex_step: output component " + std::to_string(mn) +
                             " below -1e-12 (internal consistency failure)");
  }
  return next;
}

Trajectory simulate(const State& s0, double t_end, double dt, const Params& p,
                    const Grid& g, int stride, const SteadySolution* ref) {
  if (!(t_end > 0.0)) throw std::invalid_argument("simulate: t_end must be positive");
  if (!(dt > 0.0)) throw std::invalid_argument("simulate: dt must be positive");
  if (stride < 1) throw std::invalid_argument("simulate: stride must be >= 1");
  check_state(s0, g);
  if (min_value(s0.u) < 0.0) {
    throw std::invalid_argument("simulate: initial state must be nonnegative");
  }

  const double t0 = s0.t;
  double sup0 = 0.0;
  for (int j = 0; j < g.num_nodes(); ++j) {
    sup0 = std::max(sup0, s0.u[2][j] + s0.u[3][j] + s0.u[4][j]);
  }
  const double l1sum0 = l1_norm(s0.u[0], g) + l1_norm(s0.u[1], g) +
                        l1_norm(s0.u[3], g) + l1_norm(s0.u[4], g);

  // q is near-integer whenever t_end is a multiple of dt up to rounding
  const double q = t_end / dt;
  long steps = std::lround(q);
  if (std::abs(q - static_cast<double>(steps)) > 1e-9 * std::max(1.0, q)) {
    steps = static_cast<long>(std::ceil(q));
  }
  if (steps < 1) steps = 1;
  Trajectory traj;
  traj.dt = dt;
  traj.snapshots.push_back(make_snapshot(s0, p, g, t0, sup0, l1sum0, ref));

  State cur = s0;
  for (long k = 1; k <= steps; ++k) {
    cur = imex_step(cur, dt, p, g);
    cur.t = t0 + static_cast<double>(k) * dt;  // avoid accumulated drift
    if (k % stride == 0 || k == steps) {
      traj.snapshots.push_back(make_snapshot(cur, p, g, t0, sup0, l1sum0, ref));
    }
  }
  return traj;
}

EstimateReport check_estimates(const Trajectory& traj, const Params& p, const State& u0,
                               const Grid& g) {
  check_state(u0, g);
  double sup0 = 0.0;
  for (int j = 0; j < g.num_nodes(); ++j) {
    sup0 = std::max(sup0, u0.u[2][j] + u0.u[3][j] + u0.u[4][j]);
  }
  const double l1sum0 = l1_norm(u0.u[0], g) + l1_norm(u0.u[1], g) +
                        l1_norm(u0.u[3], g) + l1_norm(u0.u[4], g);

  EstimateReport report;
  for (const Snapshot& s : traj.snapshots) {
    EstimateRow row;
    row.t = s.t;
    row.sup_value = s.sup_345;
    row.sup_bound = envelope(u0.t, s.t, p.b_min(), sup0, p.p3());
    const double sup_tol = 1e-8 + 2.0 * traj.dt * row.sup_bound;
    row.sup_margin = row.sup_bound + sup_tol - row.sup_value;
    row.sup_ok = row.sup_margin >= 0.0;

    row.l1_value = s.l1_1245[0] + s.l1_1245[1] + s.l1_1245[2] + s.l1_1245[3];
    row.l1_bound = envelope(u0.t, s.t, p.b_min(), l1sum0, p.p1());
    const double l1_tol = 1e-8 + 2.0 * traj.dt * row.l1_bound;
    row.l1_margin = row.l1_bound + l1_tol - row.l1_value;
    row.l1_ok = row.l1_margin >= 0.0;

    report.all_ok = report.all_ok && row.sup_ok && row.l1_ok;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace morph

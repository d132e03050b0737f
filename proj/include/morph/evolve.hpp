#pragma once

#include <array>
#include <vector>

#include "morph/grid.hpp"
#include "morph/model.hpp"
#include "morph/steady.hpp"

namespace morph {

/// Five species at one time. The time stepper keeps every field nonnegative
/// unconditionally; a negative value beyond round-off is an error, never a
/// clamp.
struct State {
  double t = 0.0;
  std::array<Field, 5> u;
};

/// State sampled along a run, with the per-snapshot diagnostics used by the
/// decay-estimate monitors.
struct Snapshot {
  double t = 0.0;
  std::array<Field, 5> u;
  double sup_345 = 0.0;             ///< max over nodes of u3+u4+u5
  std::array<double, 4> l1_1245{};  ///< discrete L1 norms of u1,u2,u4,u5
  double bound_sup = 0.0;           ///< pointwise decay envelope at this time
  double bound_l1 = 0.0;            ///< mass decay envelope at this time
  bool has_ref = false;
  double dist_to_ref = 0.0;  ///< max over species of sup|u_i - ref_i|
};

struct Trajectory {
  std::vector<Snapshot> snapshots;  ///< strictly increasing times
  double dt = 0.0;
};

/// One first-order step: every gain term (couplings, sources, binding
/// products) is taken explicitly at the current level, each species' own
/// loss coefficient is frozen at the current level and taken implicitly.
/// The two diffusing species solve tridiagonal M-matrix systems; the rest
/// update pointwise with positive denominators, so nonnegative input gives
/// nonnegative output for every dt > 0.
State imex_step(const State& s, double dt, const Params& p, const Grid& g);

/// Repeated stepping from s0 to t_end, snapshotting every `stride` steps
/// plus the initial and final states. If ref is nonnull each snapshot
/// records its sup-distance to that steady solution.
Trajectory simulate(const State& s0, double t_end, double dt, const Params& p,
                    const Grid& g, int stride, const SteadySolution* ref = nullptr);

struct EstimateRow {
  double t = 0.0;
  double sup_value = 0.0, sup_bound = 0.0, sup_margin = 0.0;
  double l1_value = 0.0, l1_bound = 0.0, l1_margin = 0.0;
  bool sup_ok = false, l1_ok = false;
};

struct EstimateReport {
  std::vector<EstimateRow> rows;
  bool all_ok = true;
};

/// Verifies the two decay envelopes along a trajectory started from u0:
///   max_x (u3+u4+u5)(t)        <= e^{-b_min t} max_x sum u_{i0} + p3(1-e^{-b_min t})/b_min
///   sum_{1,2,4,5} ||u_i(t)||_1 <= e^{-b_min t} sum ||u_{i0}||_1 + p1(1-e^{-b_min t})/b_min
/// each with slack 1e-8 + 2*dt*bound to absorb the first-order splitting of
/// the scheme. Failures are reported, not thrown.
EstimateReport check_estimates(const Trajectory& traj, const Params& p, const State& u0,
                               const Grid& g);

}  // namespace morph

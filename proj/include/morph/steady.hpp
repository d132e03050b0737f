#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "morph/grid.hpp"
#include "morph/model.hpp"

namespace morph {

enum class SteadyMode {
  DiscreteDelta,  ///< point source enters the linear solves as the 1/h spike
  SingularSplit,  ///< u1 = v - p1|x|/2 with the kink handled exactly
};

std::string to_string(SteadyMode mode);

struct SteadyOptions {
  double tol = 1e-10;          ///< sup-norm of the update, relative to sup(iterate)+1
  int max_iter = 10000;
  double damping = 1.0;        ///< omega in (0,1]; 1 is the plain fixed-point map
  double initial_value = 0.0;  ///< constant initial guess for (u1, u2)
};

/// Converged steady state. u3..u5 are closed from (u1, u2) by
/// steady_algebra, so the algebraic identities hold to round-off.
/// Fields are nonnegative nodewise; values in (-1e-10, 0) produced by
/// round-off are clamped to zero and counted in clamped_nodes.
struct SteadySolution {
  std::array<Field, 5> u;
  SteadyMode mode = SteadyMode::SingularSplit;
  int iterations = 0;
  double final_update = 0.0;  ///< sup-norm of the last applied correction
  double residual = 0.0;      ///< discrete L1 residual of the reduced system
  int clamped_nodes = 0;
  Grid grid;
  Params params;
};

/// Fixed-point iteration failed to reach tol within max_iter; carries the
/// per-iteration update norms for diagnosis.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& msg, std::vector<double> history)
      : std::runtime_error(msg), update_history(std::move(history)) {}
  std::vector<double> update_history;
};

/// One linearized solve: freezes the receptor closure at (v1, v2) and solves
///   (b_min - G)(u1, u2) = (p1 * source, 0)
/// with d1 = 1, d2 = d and zero-order coefficients
///   a11 = b1 - b_min + c1 + k1*H(v1,v2),  a12 = c2,
///   a21 = c1,                             a22 = b2 - b_min + c2 + k2*H(v1,v2).
/// The dominance condition holds automatically for nonnegative iterates.
std::pair<Field, Field> picard_step(const Field& v1, const Field& v2, const Params& p,
                                    const Grid& g, const Field& source);

/// Steady state by damped fixed-point iteration with the point source
/// represented as the discrete delta. Throws ConvergenceError after
/// max_iter, and std::runtime_error if the converged residual exceeds 1e-8.
SteadySolution solve_steady(const Params& p, const Grid& g,
                            const SteadyOptions& opts = {});

/// Same fixed-point loop, but iterating on the smooth remainder
/// v = u1 + p1|x|/2. The known kink profile moves to the right-hand side and
/// its nonzero end fluxes enter through the ghost-node closure, so every
/// linear solve sees smooth data only.
SteadySolution solve_steady_split(const Params& p, const Grid& g,
                                  const SteadyOptions& opts = {});

/// Max over species and nodes of |u_i(x_j) - u_i(-x_j)|. The discrete system
/// is mirror-symmetric, so this should sit at solver-tolerance level.
double check_evenness(const SteadySolution& sol);

/// One-sided slopes at the source versus the closed-form values.
struct SlopeCheck {
  std::array<double, 5> numeric;  ///< second-order one-sided differences at x=0
  std::array<double, 5> formula;  ///< local_derivatives at the center values
  std::array<double, 5> error;    ///< |numeric - formula|
};

/// Compares numeric one-sided derivatives at the origin with the source-local
/// formulas. Requires a converged solution with p1 > 0 and p3 > 0.
SlopeCheck check_local_derivatives(const SteadySolution& sol);

}  // namespace morph

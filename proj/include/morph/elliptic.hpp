#pragma once

#include <utility>

#include "morph/grid.hpp"

namespace morph {

/// Discrete two-component elliptic operator
///   (lambda - G)(u1,u2),  G = (d1*Lap, d2*Lap) + M,
///   M(u1,u2) = (-a11*u1 + a12*u2, a21*u1 - a22*u2),
/// on a Grid with Neumann closure. The zero-order coefficients must satisfy
/// a11 >= a21 >= 0 and a22 >= a12 >= 0 nodewise; together with lambda > 0
/// this makes the weighted system matrix an M-matrix, which is what gives
/// the solver its positivity preservation and the 1/lambda bound in the
/// discrete L1 norm. Construct through assemble(), which validates.
struct BlockSystem {
  Grid grid;
  double d1 = 1.0;
  double d2 = 1.0;
  double lambda = 1.0;
  Field a11, a12, a21, a22;
};

/// Validates and packs a BlockSystem. Throws std::invalid_argument naming
/// the offending node index when the dominance condition a11 >= a21,
/// a22 >= a12 fails (checked exactly; equality is allowed).
BlockSystem assemble(const Grid& g, double d1, double d2, double lambda, Field a11,
                     Field a12, Field a21, Field a22);

/// Applies (lambda - G) to (u1, u2).
std::pair<Field, Field> apply(const BlockSystem& sys, const Field& u1, const Field& u2);

/// Solves (lambda - G)(u1,u2) = (f1,f2) by block-tridiagonal elimination
/// with 2x2 diagonal blocks. The residual is verified internally against
/// 1e-10 * (||f||_1 + ||u||_1); a single refinement pass is applied first if
/// the direct sweep misses that bound, and failure after refinement throws
/// std::runtime_error. For nonnegative right-hand sides the sweep performs
/// no cancelling subtraction, so the returned solution is nonnegative to the
/// last bit.
std::pair<Field, Field> solve(const BlockSystem& sys, const Field& f1, const Field& f2);

}  // namespace morph

#pragma once

#include <vector>

namespace morph {

/// Nodal values on a Grid, one entry per node.
using Field = std::vector<double>;

/// Uniform node-centered mesh on [-1,1]. The cell count n is even so that
/// x = 0 is a node; this is required both for placing the point source and
/// for resolving the kink of the steady profile there.
struct Grid {
  int n = 0;                    ///< cell count (even, >= 4)
  double h = 0.0;               ///< spacing, 2/n
  int origin_index = 0;         ///< node index of x = 0 (n/2)
  std::vector<double> nodes;    ///< x_j = -1 + j*h, j = 0..n
  std::vector<double> weights;  ///< trapezoid quadrature weights (sum = 2)

  int num_nodes() const { return n + 1; }
};

/// Builds the mesh. Throws std::invalid_argument for odd n or n < 4.
Grid build_grid(int n);

/// Discrete Neumann Laplacian: centered second difference in the interior,
/// mirrored ghost nodes at the ends (2(u1-u0)/h^2 and 2(u_{n-1}-u_n)/h^2).
/// Exact on constants, and on quadratics at interior nodes.
Field laplacian_apply(const Field& u, const Grid& g);

/// Trapezoid quadrature sum_j w_j u_j.
double quadrature(const Field& u, const Grid& g);

/// Discrete L1 norm: quadrature of |u|.
double l1_norm(const Field& u, const Grid& g);

/// Max of |u_j|.
double sup_norm(const Field& u);

/// Single-node point source: 1/h at the origin node, zero elsewhere.
/// Quadrature against any field reproduces its value at x = 0 exactly.
Field discrete_delta(const Grid& g);

}  // namespace morph

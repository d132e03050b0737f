#include "morph/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace morph {

Grid build_grid(int n) {
  if (n < 4 || n % 2 != 0) {
    throw std::invalid_argument("build_grid: n must be an even integer >= 4, got " +
                                std::to_string(n));
  }
  Grid g;
  g.n = n;
  g.h = 2.0 / n;
  g.origin_index = n / 2;
  g.nodes.resize(n + 1);
  g.weights.resize(n + 1);
  for (int j = 0; j <= n; ++j) {
    g.nodes[j] = -1.0 + j * g.h;
    g.weights[j] = (j == 0 || j == n) ? 0.5 * g.h : g.h;
  }
  g.nodes[g.origin_index] = 0.0;  // exact origin, no accumulated rounding
  return g;
}

static void check_size(const Field& u, const Grid& g, const char* who) {
  if (static_cast<int>(u.size()) != g.num_nodes()) {
    throw std::invalid_argument(std::string(who) + ": field size " +
                                std::to_string(u.size()) + " does not match grid with " +
                                std::to_string(g.num_nodes()) + " nodes");
  }
}

Field laplacian_apply(const Field& u, const Grid& g) {
  check_size(u, g, "laplacian_apply");
  const int n = g.n;
  const double ih2 = 1.0 / (g.h * g.h);
  Field out(n + 1);
  out[0] = 2.0 * (u[1] - u[0]) * ih2;
  for (int j = 1; j < n; ++j) {
    out[j] = (u[j - 1] - 2.0 * u[j] + u[j + 1]) * ih2;
  }
  out[n] = 2.0 * (u[n - 1] - u[n]) * ih2;
  return out;
}

double quadrature(const Field& u, const Grid& g) {
  check_size(u, g, "quadrature");
  double acc = 0.0;
  for (int j = 0; j <= g.n; ++j) acc += g.weights[j] * u[j];
  return acc;
}

double l1_norm(const Field& u, const Grid& g) {
  check_size(u, g, "l1_norm");
  double acc = 0.0;
  for (int j = 0; j <= g.n; ++j) acc += g.weights[j] * std::abs(u[j]);
  return acc;
}

double sup_norm(const Field& u) {
  double m = 0.0;
  for (double v : u) m = std::max(m, std::abs(v));
  return m;
}

Field discrete_delta(const Grid& g) {
  Field d(g.num_nodes(), 0.0);
  d[g.origin_index] = 1.0 / g.weights[g.origin_index];  // = 1/h at an interior node
  return d;
}

}  // namespace morph

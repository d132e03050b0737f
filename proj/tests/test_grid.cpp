#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "morph/grid.hpp"

using morph::build_grid;
using morph::Field;
using morph::Grid;

TEST_CASE("build_grid lays out nodes, weights and the origin") {
  const Grid g = build_grid(4);
  CHECK(g.h == 0.5);
  CHECK(g.origin_index == 2);
  CHECK(g.nodes == std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0});
  CHECK(g.weights == std::vector<double>{0.25, 0.5, 0.5, 0.5, 0.25});
  double sum = 0.0;
  for (double w : g.weights) sum += w;
  CHECK(sum == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("build_grid rejects odd or too-small n") {
  CHECK_THROWS_AS(build_grid(5), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(2), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(0), std::invalid_argument);
}

TEST_CASE("origin lands exactly at zero and the delta has unit mass on every grid") {
  for (int n : {4, 6, 50, 126, 512}) {
    const Grid g = build_grid(n);
    CHECK(g.nodes[g.origin_index] == 0.0);
    CHECK(morph::quadrature(morph::discrete_delta(g), g) == 1.0);
  }
}

TEST_CASE("laplacian of a constant vanishes") {
  const Grid g = build_grid(16);
  const Field u(g.num_nodes(), 3.7);
  for (double v : morph::laplacian_apply(u, g)) CHECK(v == 0.0);
}

TEST_CASE("laplacian is exact on quadratics at interior nodes") {
  const Grid g = build_grid(16);
  Field u(g.num_nodes());
  for (int j = 0; j < g.num_nodes(); ++j) u[j] = g.nodes[j] * g.nodes[j];
  const Field lap = morph::laplacian_apply(u, g);
  for (int j = 1; j < g.n; ++j) CHECK(lap[j] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("laplacian converges at second order on a smooth no-flux profile") {
  double prev = 0.0;
  for (int n : {64, 128, 256}) {
    const Grid g = build_grid(n);
    Field u(g.num_nodes());
    for (int j = 0; j < g.num_nodes(); ++j) {
      u[j] = std::cos(std::numbers::pi * g.nodes[j]);
    }
    const Field lap = morph::laplacian_apply(u, g);
    double err = 0.0;
    for (int j = 0; j < g.num_nodes(); ++j) {
      err = std::max(err,
                     std::abs(lap[j] + std::numbers::pi * std::numbers::pi * u[j]));
    }
    if (prev > 0.0) {
      const double ratio = prev / err;
      CHECK(ratio >= 3.5);
      CHECK(ratio <= 4.5);
    }
    prev = err;
  }
}

TEST_CASE("field size mismatches are rejected") {
  const Grid g = build_grid(8);
  const Field wrong(5, 0.0);
  CHECK_THROWS_AS(morph::laplacian_apply(wrong, g), std::invalid_argument);
  CHECK_THROWS_AS(morph::quadrature(wrong, g), std::invalid_argument);
}

TEST_CASE("quadrature closed values") {
  const Grid g = build_grid(10);
  CHECK(morph::quadrature(Field(g.num_nodes(), 1.0), g) ==
        doctest::Approx(2.0).epsilon(1e-15));
  CHECK(morph::quadrature(g.nodes, g) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(morph::quadrature(morph::discrete_delta(g), g) ==
        doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("discrete delta is the 1/h spike at the origin and samples exactly") {
  const Grid g = build_grid(4);
  const Field d = morph::discrete_delta(g);
  CHECK(d == std::vector<double>{0.0, 0.0, 2.0, 0.0, 0.0});

  const Grid fine = build_grid(64);
  const Field df = morph::discrete_delta(fine);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  Field phi(fine.num_nodes());
  for (double& v : phi) v = dist(rng);
  Field prod(fine.num_nodes());
  for (int j = 0; j < fine.num_nodes(); ++j) prod[j] = phi[j] * df[j];
  CHECK(morph::quadrature(prod, fine) == phi[fine.origin_index]);

  Field xsq(fine.num_nodes());
  for (int j = 0; j < fine.num_nodes(); ++j) {
    xsq[j] = fine.nodes[j] * fine.nodes[j] * df[j];
  }
  CHECK(morph::quadrature(xsq, fine) == 0.0);
}

TEST_CASE("weighted Neumann operator is symmetric, conservative and nonpositive") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int n : {4, 30, 128}) {
    const Grid g = build_grid(n);
    const double scale = 1.0 / (g.h * g.h);
    for (int trial = 0; trial < 50; ++trial) {
      Field u(g.num_nodes()), v(g.num_nodes());
      for (double& x : u) x = dist(rng);
      for (double& x : v) x = dist(rng);
      const Field lu = morph::laplacian_apply(u, g);
      const Field lv = morph::laplacian_apply(v, g);

      Field luv(g.num_nodes()), ulv(g.num_nodes()), ulu(g.num_nodes());
      for (int j = 0; j < g.num_nodes(); ++j) {
        luv[j] = lu[j] * v[j];
        ulv[j] = u[j] * lv[j];
        ulu[j] = u[j] * lu[j];
      }
      CHECK(std::abs(morph::quadrature(luv, g) - morph::quadrature(ulv, g)) <=
            1e-12 * scale);
      CHECK(std::abs(morph::quadrature(lu, g)) <= 1e-12 * scale);
      CHECK(morph::quadrature(ulu, g) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("l1_norm and sup_norm") {
  const Grid g = build_grid(4);
  const Field u{1.0, -2.0, 0.0, 2.0, -1.0};
  CHECK(morph::l1_norm(u, g) == doctest::Approx(0.25 + 1.0 + 0.0 + 1.0 + 0.25));
  CHECK(morph::sup_norm(u) == 2.0);
}

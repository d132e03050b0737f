#include "morph/elliptic.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace morph {

namespace {

struct Block2 {  // row-major 2x2
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
};

Block2 inverse(const Block2& m, int node) {
  const double det = m.a * m.d - m.b * m.c;
  if (!std::isfinite(det) || det == 0.0) {
    throw std::runtime_error(
        "elliptic solve: singular 2x2 pivot at node " + std::to_string(node) +
        " (internal consistency failure; system invariants should preclude this)");
  }
  const double inv = 1.0 / det;
  return {m.d * inv, -m.b * inv, -m.c * inv, m.a * inv};
}

void check_field(const Field& f, int m, const char* name) {
  if (static_cast<int>(f.size()) != m) {
    throw std::invalid_argument(std::string("assemble: ") + name + " has size " +
                                std::to_string(f.size()) + ", expected " +
                                std::to_string(m));
  }
}

// Factorization of the block-tridiagonal matrix: stores W_j^{-1} and
// W_j^{-1} C_j so that repeated substitutions (refinement) reuse the sweep.
struct Factorization {
  const BlockSystem& sys;
  std::vector<Block2> winv;  // W_j^{-1}
  std::vector<Block2> gup;   // W_j^{-1} C_j, j = 0..n-1
  // neighbor coupling coefficients per row: sub (to j-1), sup (to j+1)
  double sub1_int, sup1_int, sub2_int, sup2_int;

  explicit Factorization(const BlockSystem& s) : sys(s) {
    const Grid& g = s.grid;
    const int n = g.n;
    const double ih2 = 1.0 / (g.h * g.h);
    sub1_int = -s.d1 * ih2;
    sup1_int = -s.d1 * ih2;
    sub2_int = -s.d2 * ih2;
    sup2_int = -s.d2 * ih2;
    winv.resize(n + 1);
    gup.resize(n);

    Block2 w;
    for (int j = 0; j <= n; ++j) {
      // diagonal block: reaction + lumped diffusion diagonal (2*d/h^2 at
      // every row, since boundary rows couple doubly to their one neighbor)
      Block2 bj{s.lambda + s.a11[j] + 2.0 * s.d1 * ih2, -s.a12[j], -s.a21[j],
                s.lambda + s.a22[j] + 2.0 * s.d2 * ih2};
      if (j == 0) {
        w = bj;
      } else {
        const double s1 = (j == n) ? 2.0 * sub1_int : sub1_int;
        const double s2 = (j == n) ? 2.0 * sub2_int : sub2_int;
        const Block2& gp = gup[j - 1];
        // W_j = B_j - A_j * G_{j-1}, A_j = diag(s1, s2)
        w = {bj.a - s1 * gp.a, bj.b - s1 * gp.b, bj.c - s2 * gp.c, bj.d - s2 * gp.d};
      }
      winv[j] = inverse(w, j);
      if (j < n) {
        const double c1 = (j == 0) ? 2.0 * sup1_int : sup1_int;
        const double c2 = (j == 0) ? 2.0 * sup2_int : sup2_int;
        // G_j = W_j^{-1} * C_j, C_j = diag(c1, c2)
        const Block2& iv = winv[j];
        gup[j] = {iv.a * c1, iv.b * c2, iv.c * c1, iv.d * c2};
      }
    }
  }

  void substitute(const Field& f1, const Field& f2, Field& u1, Field& u2) const {
    const int n = sys.grid.n;
    std::vector<double> y1(n + 1), y2(n + 1);
    for (int j = 0; j <= n; ++j) {
      double r1 = f1[j];
      double r2 = f2[j];
      if (j > 0) {
        const double s1 = (j == n) ? 2.0 * sub1_int : sub1_int;
        const double s2 = (j == n) ? 2.0 * sub2_int : sub2_int;
        r1 -= s1 * y1[j - 1];
        r2 -= s2 * y2[j - 1];
      }
      const Block2& iv = winv[j];
      y1[j] = iv.a * r1 + iv.b * r2;
      y2[j] = iv.c * r1 + iv.d * r2;
    }
    u1.assign(n + 1, 0.0);
    u2.assign(n + 1, 0.0);
    u1[n] = y1[n];
    u2[n] = y2[n];
    for (int j = n - 1; j >= 0; --j) {
      const Block2& gj = gup[j];
      u1[j] = y1[j] - (gj.a * u1[j + 1] + gj.b * u2[j + 1]);
      u2[j] = y2[j] - (gj.c * u1[j + 1] + gj.d * u2[j + 1]);
    }
  }
};

// Residual f - (lambda - G)u accumulated in extended precision, so the check
// measures the solve rather than the measurement.
void residual(const BlockSystem& s, const Field& u1, const Field& u2, const Field& f1,
              const Field& f2, Field& r1, Field& r2) {
  const Grid& g = s.grid;
  const int n = g.n;
  const long double ih2 = 1.0L / (static_cast<long double>(g.h) * g.h);
  r1.resize(n + 1);
  r2.resize(n + 1);
  for (int j = 0; j <= n; ++j) {
    long double lap1, lap2;
    if (j == 0) {
      lap1 = 2.0L * (static_cast<long double>(u1[1]) - u1[0]) * ih2;
      lap2 = 2.0L * (static_cast<long double>(u2[1]) - u2[0]) * ih2;
    } else if (j == n) {
      lap1 = 2.0L * (static_cast<long double>(u1[n - 1]) - u1[n]) * ih2;
      lap2 = 2.0L * (static_cast<long double>(u2[n - 1]) - u2[n]) * ih2;
    } else {
      lap1 = (static_cast<long double>(u1[j - 1]) - 2.0L * u1[j] + u1[j + 1]) * ih2;
      lap2 = (static_cast<long double>(u2[j - 1]) - 2.0L * u2[j] + u2[j + 1]) * ih2;
    }
    const long double a1 = (static_cast<long double>(s.lambda) + s.a11[j]) * u1[j] -
                           s.d1 * lap1 - static_cast<long double>(s.a12[j]) * u2[j];
    const long double a2 = (static_cast<long double>(s.lambda) + s.a22[j]) * u2[j] -
                           s.d2 * lap2 - static_cast<long double>(s.a21[j]) * u1[j];
    r1[j] = static_cast<double>(f1[j] - a1);
    r2[j] = static_cast<double>(f2[j] - a2);
  }
}

}  // namespace

BlockSystem assemble(const Grid& g, double d1, double d2, double lambda, Field a11,
                     Field a12, Field a21, Field a22) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) {
    throw std::invalid_argument("assemble: diffusivities must be strictly positive");
  }
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("assemble: lambda must be strictly positive");
  }
  const int m = g.num_nodes();
  check_field(a11, m, "a11");
  check_field(a12, m, "a12");
  check_field(a21, m, "a21");
  check_field(a22, m, "a22");
  for (int j = 0; j < m; ++j) {
    if (a11[j] < 0.0 || a12[j] < 0.0 || a21[j] < 0.0 || a22[j] < 0.0) {
      throw std::invalid_argument("assemble: negative zero-order coefficient at node " +
                                  std::to_string(j));
    }
    if (a11[j] - a21[j] < 0.0 || a22[j] - a12[j] < 0.0) {
      throw std::invalid_argument(
          "assemble: dominance condition a11 >= a21, a22 >= a12 violated at node " +
          std::to_string(j));
    }
  }
  return BlockSystem{g, d1, d2, lambda, std::move(a11), std::move(a12), std::move(a21),
                     std::move(a22)};
}

std::pair<Field, Field> apply(const BlockSystem& sys, const Field& u1, const Field& u2) {
  const int m = sys.grid.num_nodes();
  if (static_cast<int>(u1.size()) != m || static_cast<int>(u2.size()) != m) {
    throw std::invalid_argument("apply: field size mismatch");
  }
  const Field lap1 = laplacian_apply(u1, sys.grid);
  const Field lap2 = laplacian_apply(u2, sys.grid);
  Field r1(m), r2(m);
  for (int j = 0; j < m; ++j) {
    r1[j] = (sys.lambda + sys.a11[j]) * u1[j] - sys.d1 * lap1[j] - sys.a12[j] * u2[j];
    r2[j] = (sys.lambda + sys.a22[j]) * u2[j] - sys.d2 * lap2[j] - sys.a21[j] * u1[j];
  }
  return {std::move(r1), std::move(r2)};
}

std::pair<Field, Field> solve(const BlockSystem& sys, const Field& f1, const Field& f2) {
  const int m = sys.grid.num_nodes();
  if (static_cast<int>(f1.size()) != m || static_cast<int>(f2.size()) != m) {
    throw std::invalid_argument("solve: rhs size mismatch");
  }
  const Factorization fac(sys);
  Field u1, u2;
  fac.substitute(f1, f2, u1, u2);

  Field r1, r2;
  residual(sys, u1, u2, f1, f2, r1, r2);
  const double fnorm = l1_norm(f1, sys.grid) + l1_norm(f2, sys.grid);
  auto bound = [&] {
    return 1e-10 * (fnorm + l1_norm(u1, sys.grid) + l1_norm(u2, sys.grid));
  };
  double rnorm = l1_norm(r1, sys.grid) + l1_norm(r2, sys.grid);
  for (int pass = 0; pass < 3 && rnorm > bound(); ++pass) {
    Field e1, e2;
    fac.substitute(r1, r2, e1, e2);
    for (int j = 0; j < m; ++j) {
      u1[j] += e1[j];
      u2[j] += e2[j];
    }
    residual(sys, u1, u2, f1, f2, r1, r2);
    rnorm = l1_norm(r1, sys.grid) + l1_norm(r2, sys.grid);
  }
  if (rnorm > bound()) {
    char what[160];
    std::snprintf(what, sizeof(what),
                  "elliptic solve: residual %.3e exceeds internal tolerance %.3e "
                  "after refinement (internal consistency failure)",
                  rnorm, bound());
    throw std::runtime_error(what);
  }
  return {std::move(u1), std::move(u2)};
}

}  // namespace morph

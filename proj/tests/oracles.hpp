#pragma once

// Test-side reference computations. These stay independent of the solver
// paths they are used to check: the profile below is a closed form, and the
// ODE reference integrates the pointwise kinetics with a classical
// fourth-order scheme at a much finer step than anything under test.

#include <array>
#include <cmath>

#include "morph/model.hpp"

namespace oracles {

// Steady solution of -u'' + b1*u = p1*delta on (-1,1) with no-flux ends.
inline double point_source_profile(double b1, double p1, double x) {
  const double r = std::sqrt(b1);
  return p1 * std::cosh(r * (1.0 - std::abs(x))) / (2.0 * r * std::sinh(r));
}

inline std::array<double, 5> rk4_reaction(std::array<double, 5> u,
                                          const morph::Params& p, double t_end,
                                          double dt) {
  auto add = [](const std::array<double, 5>& a, const std::array<double, 5>& b,
                double w) {
    std::array<double, 5> out;
    for (int i = 0; i < 5; ++i) out[i] = a[i] + w * b[i];
    return out;
  };
  const long steps = std::lround(t_end / dt);
  for (long s = 0; s < steps; ++s) {
    const auto k1 = morph::reaction_rhs(u, p);
    const auto k2 = morph::reaction_rhs(add(u, k1, 0.5 * dt), p);
    const auto k3 = morph::reaction_rhs(add(u, k2, 0.5 * dt), p);
    const auto k4 = morph::reaction_rhs(add(u, k3, dt), p);
    for (int i = 0; i < 5; ++i) {
      u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
  }
  return u;
}

}  // namespace oracles

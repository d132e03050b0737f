#include "morph/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace morph {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

Params::Params(double d, const std::array<double, 5>& b, const std::array<double, 5>& c,
               double p1, double p3)
    : d_(d), b_(b), c_(c), p1_(p1), p3_(p3) {
  require(finite(d) && d > 0.0, "Params: d must be strictly positive");
  for (int i = 0; i < 5; ++i) {
    require(finite(b[i]) && b[i] > 0.0,
            "Params: b" + std::to_string(i + 1) + " must be strictly positive");
    require(finite(c[i]) && c[i] >= 0.0,
            "Params: c" + std::to_string(i + 1) + " must be nonnegative");
  }
  require(finite(p1) && p1 >= 0.0, "Params: p1 must be nonnegative");
  require(finite(p3) && p3 >= 0.0, "Params: p3 must be nonnegative");
  k1_ = b_[3] / (b_[3] + c_[3]);
  k2_ = c_[2] * b_[4] / (b_[4] + c_[4]);
  b_min_ = *std::min_element(b_.begin(), b_.end());
}

Params nondimensionalize(const DimensionalParameters& dp) {
  require(finite(dp.D) && dp.D > 0.0, "nondimensionalize: D must be strictly positive");
  require(finite(dp.Dstar) && dp.Dstar > 0.0,
          "nondimensionalize: Dstar must be strictly positive");
  require(finite(dp.L) && dp.L > 0.0, "nondimensionalize: L must be strictly positive");
  require(dp.gamma > 0.0, "nondimensionalize: gamma must be strictly positive");
  require(dp.gammaStar > 0.0, "nondimensionalize: gammaStar must be strictly positive");
  require(dp.alpha > 0.0, "nondimensionalize: alpha must be strictly positive");
  require(dp.alphaStar > 0.0, "nondimensionalize: alphaStar must be strictly positive");
  require(dp.kR > 0.0, "nondimensionalize: kR must be strictly positive (c3 = kRg/kR)");
  for (double rate : {dp.k, dp.kPrime, dp.kRPrime, dp.kRg, dp.kRgPrime, dp.s,
                      dp.GammaProd, dp.Gconc}) {
    require(finite(rate) && rate >= 0.0, "nondimensionalize: rates must be nonnegative");
  }

  const double T = dp.L * dp.L / dp.D;
  const double K = T * dp.kR;
  const double d = dp.Dstar / dp.D;
  const std::array<double, 5> b = {T * dp.gamma, T * dp.gammaStar, T * dp.alpha,
                                   T * dp.alphaStar, T * dp.alphaStar};
  const std::array<double, 5> c = {T * dp.k * dp.Gconc, T * dp.kPrime, dp.kRg / dp.kR,
                                   T * dp.kRPrime, T * dp.kRgPrime};
  return Params(d, b, c, K * T * dp.s, K * T * dp.GammaProd);
}

double h_eval(double x1, double x2, const Params& p) {
  return p.p3() / (p.k1() * x1 + p.k2() * x2 + p.b3());
}

std::array<double, 5> reaction_rhs(const std::array<double, 5>& u, const Params& p) {
  const double u1 = u[0], u2 = u[1], u3 = u[2], u4 = u[3], u5 = u[4];
  return {
      -(p.b1() + p.c1() + u3) * u1 + p.c2() * u2 + p.c4() * u4,
      -(p.b2() + p.c2() + p.c3() * u3) * u2 + p.c1() * u1 + p.c5() * u5,
      -(p.b3() + u1 + p.c3() * u2) * u3 + p.c4() * u4 + p.c5() * u5 + p.p3(),
      -(p.b4() + p.c4()) * u4 + u1 * u3,
      -(p.b5() + p.c5()) * u5 + p.c3() * u2 * u3,
  };
}

std::array<double, 3> steady_algebra(double u1, double u2, const Params& p) {
  const double H = h_eval(u1, u2, p);
  return {H, p.k1() * u1 * H / p.b4(), p.k2() * u2 * H / p.b5()};
}

std::array<std::vector<double>, 3> steady_algebra(const std::vector<double>& u1,
                                                  const std::vector<double>& u2,
                                                  const Params& p) {
  require(u1.size() == u2.size(), "steady_algebra: field sizes differ");
  const std::size_t m = u1.size();
  std::array<std::vector<double>, 3> out;
  for (auto& f : out) f.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    const auto v = steady_algebra(u1[j], u2[j], p);
    out[0][j] = v[0];
    out[1][j] = v[1];
    out[2][j] = v[2];
  }
  return out;
}

std::array<double, 5> local_derivatives(double u1_at_0, double u2_at_0, const Params& p) {
  require(p.p3() > 0.0, "local_derivatives: requires p3 > 0");
  require(u1_at_0 >= 0.0 && u2_at_0 >= 0.0,
          "local_derivatives: center values must be nonnegative");
  const double H = h_eval(u1_at_0, u2_at_0, p);
  const double H2 = H * H;
  const double base = p.p1() * p.k1() / (2.0 * p.p3());
  return {
      -0.5 * p.p1(),
      0.0,
      base * H2,
      -base / p.b4() * H2 * (p.k2() * u2_at_0 + p.b3()),
      base * p.k2() / p.b5() * H2 * u2_at_0,
  };
}

}  // namespace morph

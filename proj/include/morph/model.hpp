#pragma once

#include <array>
#include <vector>

namespace morph {

/// Dimensional rate constants of the five-species transport model: free
/// ligand W, ligand-glypican complex W*, free receptor R, ligand-receptor
/// complex R*, and ligand-glypican-receptor complex Rg*. Plain record;
/// consistency is checked by nondimensionalize().
struct DimensionalParameters {
  double D;          ///< free-ligand diffusivity [length^2/time]
  double Dstar;      ///< complex (W*) diffusivity [length^2/time]
  double gamma;      ///< W degradation rate [1/time]
  double gammaStar;  ///< W* degradation rate [1/time]
  double k;          ///< W + glypican association rate [1/(conc*time)]
  double kPrime;     ///< W* dissociation rate [1/time]
  double kR;         ///< W + receptor association rate [1/(conc*time)]
  double kRPrime;    ///< R* dissociation rate [1/time]
  double kRg;        ///< W* + receptor association rate [1/(conc*time)]
  double kRgPrime;   ///< Rg* dissociation rate [1/time]
  double alpha;      ///< free-receptor internalization rate [1/time]
  double alphaStar;  ///< bound-receptor internalization rate [1/time]
  double s;          ///< ligand secretion rate at the source [conc*length/time]
  double GammaProd;  ///< receptor production rate [conc/time]
  double Gconc;      ///< glypican concentration (held constant) [conc]
  double L;          ///< half-length of the tissue segment [length]
};

/// Nondimensional model parameters: diffusivity ratio d, decay coefficients
/// b1..b5 (all > 0), coupling coefficients c1..c5 (all >= 0), and the two
/// source coefficients p1 (point-source mass) and p3 (receptor production).
/// The derived constants k1 = b4/(b4+c4) and k2 = c3*b5/(b5+c5) that close
/// the receptor equations algebraically are computed once at construction
/// and exposed read-only.
class Params {
 public:
  Params(double d, const std::array<double, 5>& b, const std::array<double, 5>& c,
         double p1, double p3);

  double d() const { return d_; }
  const std::array<double, 5>& b() const { return b_; }
  const std::array<double, 5>& c() const { return c_; }
  double p1() const { return p1_; }
  double p3() const { return p3_; }

  double b1() const { return b_[0]; }
  double b2() const { return b_[1]; }
  double b3() const { return b_[2]; }
  double b4() const { return b_[3]; }
  double b5() const { return b_[4]; }
  double c1() const { return c_[0]; }
  double c2() const { return c_[1]; }
  double c3() const { return c_[2]; }
  double c4() const { return c_[3]; }
  double c5() const { return c_[4]; }

  double k1() const { return k1_; }
  double k2() const { return k2_; }
  double b_min() const { return b_min_; }

 private:
  double d_;
  std::array<double, 5> b_;
  std::array<double, 5> c_;
  double p1_;
  double p3_;
  double k1_;
  double k2_;
  double b_min_;
};

/// Maps dimensional constants to Params with T = L^2/D, K = T*kR,
/// d = Dstar/D, b = (T*gamma, T*gammaStar, T*alpha, T*alphaStar, T*alphaStar),
/// c = (T*k*Gconc, T*kPrime, kRg/kR, T*kRPrime, T*kRgPrime),
/// p1 = K*T*s, p3 = K*T*GammaProd.
/// Throws std::invalid_argument if the record violates its constraints
/// (in particular kR = 0, which leaves c3 undefined).
Params nondimensionalize(const DimensionalParameters& dp);

/// Receptor closure p3 / (k1*x1 + k2*x2 + b3). Strictly positive and bounded
/// by p3/b3 for nonnegative inputs; globally Lipschitz since the denominator
/// stays >= b3 > 0.
double h_eval(double x1, double x2, const Params& p);

/// Pointwise reaction rates of the five species: the non-diffusive,
/// non-singular part of the dynamics. Quasipositive: f_i >= 0 whenever
/// u_i = 0 and the other components are nonnegative.
std::array<double, 5> reaction_rhs(const std::array<double, 5>& u, const Params& p);

/// Closes (u3, u4, u5) from (u1, u2) at a steady state:
/// u3 = H(u1,u2), u4 = k1*u1*H/b4, u5 = k2*u2*H/b5.
std::array<double, 3> steady_algebra(double u1, double u2, const Params& p);

/// Nodewise version of the scalar closure.
std::array<std::vector<double>, 3> steady_algebra(const std::vector<double>& u1,
                                                  const std::vector<double>& u2,
                                                  const Params& p);

/// One-sided derivatives of the steady profiles at the source, given the
/// center values u1(0), u2(0):
///   u1' = -p1/2                      u2' = 0
///   u3' =  p1*k1/(2*p3) * H^2
///   u4' = -p1*k1/(2*p3*b4) * H^2 * (k2*u2(0) + b3)
///   u5' =  p1*k1*k2/(2*p3*b5) * H^2 * u2(0)
/// with H = h_eval(u1(0), u2(0)). The u4 slope uses the unfactored form so
/// it stays defined at k2 = 0. Requires p3 > 0 and nonnegative inputs.
std::array<double, 5> local_derivatives(double u1_at_0, double u2_at_0, const Params& p);

}  // namespace morph

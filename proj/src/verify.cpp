#include "morph/verify.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "morph/evolve.hpp"
#include "morph/steady.hpp"

namespace morph {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void add(VerificationReport& rep, const std::string& name, bool ok,
         const std::string& detail) {
  rep.checks.push_back({name, ok, detail});
  rep.all_passed = rep.all_passed && ok;
}

// ---- mesh identities -------------------------------------------------------

void check_grid(VerificationReport& rep, const RunConfig& cfg) {
  std::mt19937_64 rng(101);
  bool sum_ok = true, sbp_ok = true, cons_ok = true, neg_ok = true, delta_ok = true;
  double sbp_worst = 0.0, cons_worst = 0.0, neg_worst = 0.0;
  for (int n : {4, 16, 62, cfg.grid_n}) {
    const Grid g = build_grid(n);
    double wsum = 0.0;
    for (double w : g.weights) wsum += w;
    sum_ok = sum_ok && std::abs(wsum - 2.0) <= 1e-13;

    for (int trial = 0; trial < 20; ++trial) {
      const Field u = random_field(rng, g.num_nodes(), -1.0, 1.0);
      const Field v = random_field(rng, g.num_nodes(), -1.0, 1.0);
      const Field lu = laplacian_apply(u, g);
      const Field lv = laplacian_apply(v, g);
      Field luv(g.num_nodes()), ulv(g.num_nodes()), uu(g.num_nodes());
      for (int j = 0; j < g.num_nodes(); ++j) {
        luv[j] = lu[j] * v[j];
        ulv[j] = u[j] * lv[j];
        uu[j] = u[j] * lu[j];
      }
      const double scale = 1.0 / (g.h * g.h);
      const double sbp = std::abs(quadrature(luv, g) - quadrature(ulv, g)) / scale;
      const double cons = std::abs(quadrature(lu, g)) / scale;
      const double neg = quadrature(uu, g) / scale;  // must be <= 0 up to round-off
      sbp_worst = std::max(sbp_worst, sbp);
      cons_worst = std::max(cons_worst, cons);
      neg_worst = std::max(neg_worst, neg);
      sbp_ok = sbp_ok && sbp <= 1e-12;
      cons_ok = cons_ok && cons <= 1e-12;
      neg_ok = neg_ok && neg <= 1e-12;
    }

    const Field d = discrete_delta(g);
    delta_ok = delta_ok && std::abs(quadrature(d, g) - 1.0) <= 1e-14;
    Field xsq(g.num_nodes());
    for (int j = 0; j < g.num_nodes(); ++j) xsq[j] = g.nodes[j] * g.nodes[j] * d[j];
    delta_ok = delta_ok && std::abs(quadrature(xsq, g)) <= 1e-14;
  }
  add(rep, "grid.weights_sum", sum_ok, "trapezoid weights sum to the domain measure");
  add(rep, "grid.summation_by_parts", sbp_ok,
      "scaled defect " + fmt(sbp_worst) + " <= 1e-12");
  add(rep, "grid.flux_conservation", cons_ok,
      "scaled defect " + fmt(cons_worst) + " <= 1e-12");
  add(rep, "grid.nonpositive_form", neg_ok,
      "scaled excess " + fmt(neg_worst) + " <= 1e-12");
  add(rep, "grid.delta_pairing", delta_ok, "unit mass and exact sampling at x=0");

  // second-order consistency on a smooth Neumann-compatible profile
  double prev_err = 0.0;
  bool order_ok = true;
  std::string order_detail;
  for (int n : {64, 128, 256}) {
    const Grid g = build_grid(n);
    Field u(g.num_nodes());
    for (int j = 0; j < g.num_nodes(); ++j) {
      u[j] = std::cos(std::numbers::pi * g.nodes[j]);
    }
    const Field lu = laplacian_apply(u, g);
    double err = 0.0;
    for (int j = 0; j < g.num_nodes(); ++j) {
      err = std::max(err, std::abs(lu[j] + std::numbers::pi * std::numbers::pi * u[j]));
    }
    if (prev_err > 0.0) {
      const double ratio = prev_err / err;
      order_ok = order_ok && ratio >= 3.5 && ratio <= 4.5;
      order_detail += " ratio=" + fmt(ratio);
    }
    prev_err = err;
  }
  add(rep, "grid.laplacian_second_order", order_ok, "refinement" + order_detail);
}

// ---- resolvent properties --------------------------------------------------

void check_elliptic(VerificationReport& rep) {
  std::mt19937_64 rng(202);
  int pos_fail = 0, l1_fail = 0, res_fail = 0;
  double worst_min = 0.0, worst_l1_excess = 0.0;
  const int trials = 1000;
  for (int trial = 0; trial < trials; ++trial) {
    const BlockSystem sys = random_dominant_system(rng);
    const int m = sys.grid.num_nodes();

    const Field f1p = random_field(rng, m, 0.0, 1.0);
    const Field f2p = random_field(rng, m, 0.0, 1.0);
    auto [u1p, u2p] = solve(sys, f1p, f2p);
    double mn = 0.0, supf = 0.0;
    for (int j = 0; j < m; ++j) {
      mn = std::min({mn, u1p[j], u2p[j]});
      supf = std::max({supf, f1p[j], f2p[j]});
    }
    if (mn < -1e-12 * supf) ++pos_fail;
    worst_min = std::min(worst_min, mn);

    const Field f1s = random_field(rng, m, -1.0, 1.0);
    const Field f2s = random_field(rng, m, -1.0, 1.0);
    auto [u1s, u2s] = solve(sys, f1s, f2s);
    const double unorm = l1_norm(u1s, sys.grid) + l1_norm(u2s, sys.grid);
    const double fnorm = l1_norm(f1s, sys.grid) + l1_norm(f2s, sys.grid);
    const double excess = unorm - fnorm / sys.lambda * (1.0 + 1e-10);
    if (excess > 0.0) ++l1_fail;
    worst_l1_excess = std::max(worst_l1_excess, excess);

    auto [r1, r2] = apply(sys, u1s, u2s);
    double rnorm = 0.0;
    for (int j = 0; j < m; ++j) {
      r1[j] -= f1s[j];
      r2[j] -= f2s[j];
    }
    rnorm = l1_norm(r1, sys.grid) + l1_norm(r2, sys.grid);
    if (rnorm > 1e-10 * (fnorm + unorm)) ++res_fail;
  }
  add(rep, "elliptic.positivity_preservation", pos_fail == 0,
      std::to_string(trials) + " systems, worst min " + fmt(worst_min));
  add(rep, "elliptic.resolvent_l1_bound", l1_fail == 0,
      std::to_string(trials) + " systems, worst excess " + fmt(worst_l1_excess));
  add(rep, "elliptic.solve_consistency", res_fail == 0,
      "operator applied to solution reproduces the data");

  int dense_fail = 0;
  double worst_rel = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> pick(2, 8);
    const Grid g = build_grid(2 * pick(rng));  // n in {4,...,16}
    const int m = g.num_nodes();
    std::uniform_real_distribution<double> dpos(0.1, 4.0);
    Field a21 = random_field(rng, m, 0.0, 3.0);
    Field a12 = random_field(rng, m, 0.0, 3.0);
    Field a11 = a21, a22 = a12;
    const Field s1 = random_field(rng, m, 0.0, 3.0);
    const Field s2 = random_field(rng, m, 0.0, 3.0);
    for (int j = 0; j < m; ++j) {
      a11[j] += s1[j];
      a22[j] += s2[j];
    }
    const BlockSystem sys =
        assemble(g, dpos(rng), dpos(rng), dpos(rng), a11, a12, a21, a22);
    const Field f1 = random_field(rng, m, -1.0, 1.0);
    const Field f2 = random_field(rng, m, -1.0, 1.0);
    auto [u1, u2] = solve(sys, f1, f2);
    auto [v1, v2] = dense_reference_solve(sys, f1, f2);
    double diff = 0.0, scale = 0.0;
    for (int j = 0; j < m; ++j) {
      diff = std::max({diff, std::abs(u1[j] - v1[j]), std::abs(u2[j] - v2[j])});
      scale = std::max({scale, std::abs(v1[j]), std::abs(v2[j])});
    }
    const double rel = diff / std::max(scale, 1e-300);
    worst_rel = std::max(worst_rel, rel);
    if (rel > 1e-10) ++dense_fail;
  }
  add(rep, "elliptic.dense_oracle", dense_fail == 0,
      "100 small systems, worst relative gap " + fmt(worst_rel));
}

// ---- steady-state checks on the configured parameters ----------------------

void check_steady(VerificationReport& rep, const RunConfig& cfg) {
  const Params& p = cfg.params;
  const Grid g = build_grid(cfg.grid_n);
  auto run = [&](SteadyMode mode, const SteadyOptions& o) {
    return mode == SteadyMode::DiscreteDelta ? solve_steady(p, g, o)
                                             : solve_steady_split(p, g, o);
  };

  SteadySolution sol = run(cfg.mode, cfg.steady);
  add(rep, "steady.fixed_point_residual", sol.residual <= 1e-8,
      "residual " + fmt(sol.residual) + " after " + std::to_string(sol.iterations) +
          " iterations");

  {  // different initializations and dampings land on the same solution
    double scale = 0.0;
    for (const Field& f : sol.u) scale = std::max(scale, sup_norm(f));
    std::vector<SteadySolution> sols;
    for (double init : {0.0, 10.0 * p.p1()}) {
      for (double damping : {1.0, 0.5}) {
        SteadyOptions o = cfg.steady;
        o.initial_value = init;
        o.damping = damping;
        sols.push_back(run(cfg.mode, o));
      }
    }
    double worst = 0.0;
    for (std::size_t a = 0; a < sols.size(); ++a) {
      for (std::size_t b = a + 1; b < sols.size(); ++b) {
        for (int i = 0; i < 5; ++i) {
          for (int j = 0; j < g.num_nodes(); ++j) {
            worst = std::max(worst, std::abs(sols[a].u[i][j] - sols[b].u[i][j]));
          }
        }
      }
    }
    add(rep, "steady.uniqueness", worst <= 1e-8,
        "max spread " + fmt(worst) + " over 4 initializations (scale " + fmt(scale) +
            ")");
  }

  {  // algebraic closure holds nodewise
    double worst = 0.0;
    for (int j = 0; j < g.num_nodes(); ++j) {
      const double H = h_eval(sol.u[0][j], sol.u[1][j], p);
      worst = std::max(worst, std::abs(p.b4() * sol.u[3][j] - p.k1() * sol.u[0][j] * H));
      worst = std::max(worst, std::abs(p.b5() * sol.u[4][j] - p.k2() * sol.u[1][j] * H));
    }
    const double scale = std::max(1.0, sup_norm(sol.u[0]) * p.p3());
    add(rep, "steady.closure_identities", worst <= 1e-12 * scale,
        "worst defect " + fmt(worst));
  }

  {  // evenness of the converged profile
    const double asym = check_evenness(sol);
    double scale = 0.0;
    for (const Field& f : sol.u) scale = std::max(scale, sup_norm(f));
    const double tol = 10.0 * cfg.steady.tol * (scale + 1.0);
    add(rep, "steady.evenness", asym <= tol,
        "asymmetry " + fmt(asym) + " <= " + fmt(tol));
  }

  {  // stationary mass balance: production balances decay
    Field integrand(g.num_nodes());
    for (int j = 0; j < g.num_nodes(); ++j) {
      integrand[j] = p.b1() * sol.u[0][j] + p.b2() * sol.u[1][j] +
                     p.b4() * sol.u[3][j] + p.b5() * sol.u[4][j];
    }
    const double defect = std::abs(quadrature(integrand, g) - p.p1());
    const double tol = 1e-9 * std::max(1.0, p.p1());
    add(rep, "steady.mass_balance", defect <= tol,
        "defect " + fmt(defect) + " <= " + fmt(tol));
  }

  if (p.p1() > 0.0) {  // removing the kink leaves bounded curvature at the source
    const Grid g2 = build_grid(2 * cfg.grid_n);
    const SteadySolution solf =
        cfg.mode == SteadyMode::DiscreteDelta ? solve_steady(p, g2, cfg.steady)
                                              : solve_steady_split(p, g2, cfg.steady);
    auto second_diff = [](const SteadySolution& s, bool remove_kink) {
      const Grid& gg = s.grid;
      const int j0 = gg.origin_index;
      auto val = [&](int j) {
        double v = s.u[0][j];
        if (remove_kink) v += 0.5 * s.params.p1() * std::abs(gg.nodes[j]);
        return v;
      };
      return std::abs(val(j0 - 1) - 2.0 * val(j0) + val(j0 + 1)) / (gg.h * gg.h);
    };
    const double smooth_c = second_diff(sol, true);
    const double smooth_f = second_diff(solf, true);
    const double raw_c = second_diff(sol, false);
    const double raw_f = second_diff(solf, false);
    const bool ok = smooth_f <= 1.5 * std::max(smooth_c, 1.0) && raw_f >= 1.8 * raw_c;
    add(rep, "steady.split_regularity", ok,
        "smooth curvature " + fmt(smooth_c) + " -> " + fmt(smooth_f) +
            ", raw curvature " + fmt(raw_c) + " -> " + fmt(raw_f));
  } else {
    add(rep, "steady.split_regularity", true, "skipped (p1 = 0, no kink)");
  }

  if (p.p1() > 0.0 && p.p3() > 0.0) {  // source-local slopes vs closed forms
    const Grid gf = build_grid(2 * cfg.grid_n);
    const SteadySolution solf =
        cfg.mode == SteadyMode::DiscreteDelta ? solve_steady(p, gf, cfg.steady)
                                              : solve_steady_split(p, gf, cfg.steady);
    const SlopeCheck coarse = check_local_derivatives(sol);
    const SlopeCheck fine = check_local_derivatives(solf);
    double worst_ratio = 1e9;
    double emax_c = 0.0, emax_f = 0.0;
    for (int i = 0; i < 5; ++i) {
      emax_c = std::max(emax_c, coarse.error[i]);
      emax_f = std::max(emax_f, fine.error[i]);
    }
    worst_ratio = emax_c / std::max(emax_f, 1e-300);
    const bool signs = coarse.numeric[0] < 0.0 && coarse.numeric[2] > 0.0 &&
                       coarse.numeric[3] < 0.0 &&
                       (p.k2() == 0.0 || sol.u[1][g.origin_index] == 0.0 ||
                        coarse.numeric[4] > 0.0);
    add(rep, "steady.local_slopes", worst_ratio >= 1.8 && signs,
        "slope-error contraction " + fmt(worst_ratio) + ", signs " +
            (signs ? "match" : "mismatch"));
  } else {
    add(rep, "steady.local_slopes", true, "skipped (needs p1 > 0 and p3 > 0)");
  }

  {  // the two source treatments agree
    const SteadySolution other = cfg.mode == SteadyMode::DiscreteDelta
                                     ? solve_steady_split(p, g, cfg.steady)
                                     : solve_steady(p, g, cfg.steady);
    double worst = 0.0, scale = 1.0;
    for (int i = 0; i < 5; ++i) {
      scale = std::max(scale, sup_norm(sol.u[i]));
      for (int j = 0; j < g.num_nodes(); ++j) {
        worst = std::max(worst, std::abs(sol.u[i][j] - other.u[i][j]));
      }
    }
    add(rep, "steady.cross_mode_agreement", worst <= 1e-8 * scale,
        "sup gap " + fmt(worst) + " (scale " + fmt(scale) + ")");
  }

  {  // no source: closed-form equilibrium in at most two sweeps
    const Params p0(p.d(), p.b(), p.c(), 0.0, p.p3());
    SteadyOptions o = cfg.steady;
    o.initial_value = 0.0;
    const SteadySolution zs = cfg.mode == SteadyMode::DiscreteDelta
                                  ? solve_steady(p0, g, o)
                                  : solve_steady_split(p0, g, o);
    Field u3_defect = zs.u[2];
    for (double& v : u3_defect) v -= p0.p3() / p0.b3();
    double worst = sup_norm(u3_defect);
    worst = std::max({worst, sup_norm(zs.u[0]), sup_norm(zs.u[1]), sup_norm(zs.u[3]),
                      sup_norm(zs.u[4])});
    add(rep, "steady.zero_source_exactness", worst <= 1e-12 && zs.iterations <= 2,
        "defect " + fmt(worst) + " in " + std::to_string(zs.iterations) + " iterations");
  }
}

// ---- evolution monitors ------------------------------------------------

void check_evolve(VerificationReport& rep, const RunConfig& cfg) {
  const Params& p = cfg.params;
  const Grid g = build_grid(cfg.grid_n);

  {  // unconditional positivity across step sizes
    std::mt19937_64 rng(303);
    bool ok = true;
    double worst = 0.0;
    for (int trial = 0; trial < 25; ++trial) {
      State s;
      s.t = 0.0;
      for (auto& f : s.u) f = random_field(rng, g.num_nodes(), 0.0, 5.0);
      for (double dt : {1e-3, 1.0, 1e3}) {
        const State out = imex_step(s, dt, p, g);
        for (const Field& f : out.u) {
          for (double v : f) {
            worst = std::min(worst, v);
            ok = ok && v >= -1e-12;
          }
        }
      }
    }
    add(rep, "evolve.positivity", ok, "25 random states x 3 step sizes, min " +
                                          fmt(worst));
  }

  {  // decay envelopes along the configured run from rest
    State s0;
    s0.t = 0.0;
    for (auto& f : s0.u) f.assign(g.num_nodes(), 0.0);
    const double t_end = std::min(cfg.t_end, 10.0);
    const Trajectory traj = simulate(s0, t_end, cfg.dt, p, g, cfg.stride);
    const EstimateReport est = check_estimates(traj, p, s0, g);
    double worst_margin = 1e300;
    for (const EstimateRow& r : est.rows) {
      worst_margin = std::min({worst_margin, r.sup_margin, r.l1_margin});
    }
    add(rep, "evolve.decay_envelopes", est.all_ok,
        std::to_string(est.rows.size()) + " snapshots to t=" + fmt(t_end) +
            ", worst margin " + fmt(worst_margin));
  }

  {  // first order in time against a fine reference
    const Grid gc = build_grid(128);
    State s0;
    s0.t = 0.0;
    for (auto& f : s0.u) f.assign(gc.num_nodes(), 0.0);
    auto terminal = [&](double dt) {
      const Trajectory tr = simulate(s0, 1.0, dt, p, gc, 1 << 30);
      return tr.snapshots.back();
    };
    const Snapshot ref = terminal(1.0 / 32768.0);
    auto err = [&](const Snapshot& s) {
      double e = 0.0;
      for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < gc.num_nodes(); ++j) {
          e = std::max(e, std::abs(s.u[i][j] - ref.u[i][j]));
        }
      }
      return e;
    };
    const double e_coarse = err(terminal(1.0 / 512.0));
    const double e_fine = err(terminal(1.0 / 1024.0));
    if (e_coarse <= 1e-13) {
      add(rep, "evolve.temporal_order", true,
          "degenerate: flow is stationary for this configuration");
    } else {
      const double ratio = e_coarse / std::max(e_fine, 1e-300);
      add(rep, "evolve.temporal_order", ratio >= 1.7 && ratio <= 2.3,
          "halving dt contracts the terminal error by " + fmt(ratio));
    }
  }

  {  // the computed steady state is a fixed point of the flow
    const SteadySolution sol = cfg.mode == SteadyMode::DiscreteDelta
                                   ? solve_steady(p, g, cfg.steady)
                                   : solve_steady_split(p, g, cfg.steady);
    State s0;
    s0.t = 0.0;
    s0.u = sol.u;
    const Trajectory tr = simulate(s0, 1.0, cfg.dt, p, g, 1 << 30, &sol);
    const double drift = tr.snapshots.back().dist_to_ref;
    const double tol = 10.0 * (sol.residual + cfg.dt);
    add(rep, "evolve.steady_fixed_point", drift <= tol,
        "drift " + fmt(drift) + " after t=1 (tolerance " + fmt(tol) + ")");
  }
}

}  // namespace

BlockSystem random_dominant_system(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> half(2, 16);  // n in {4,...,32}
  const Grid g = build_grid(2 * half(rng));
  const int m = g.num_nodes();
  std::uniform_real_distribution<double> logd(-1.0, 1.0);
  std::uniform_real_distribution<double> logl(-1.3, 1.3);
  const double d1 = std::pow(10.0, logd(rng));
  const double d2 = std::pow(10.0, logd(rng));
  const double lambda = std::pow(10.0, logl(rng));
  Field a21 = random_field(rng, m, 0.0, 5.0);
  Field a12 = random_field(rng, m, 0.0, 5.0);
  Field a11 = a21, a22 = a12;
  const Field s1 = random_field(rng, m, 0.0, 5.0);
  const Field s2 = random_field(rng, m, 0.0, 5.0);
  for (int j = 0; j < m; ++j) {
    a11[j] += s1[j];
    a22[j] += s2[j];
  }
  return assemble(g, d1, d2, lambda, std::move(a11), std::move(a12), std::move(a21),
                  std::move(a22));
}

Field random_field(std::mt19937_64& rng, int num_nodes, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Field f(num_nodes);
  for (double& v : f) v = dist(rng);
  return f;
}

std::pair<Field, Field> dense_reference_solve(const BlockSystem& sys, const Field& f1,
                                              const Field& f2) {
  const Grid& g = sys.grid;
  const int n = g.n;
  const int m = 2 * (n + 1);
  const double ih2 = 1.0 / (g.h * g.h);
  std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));

  for (int j = 0; j <= n; ++j) {
    const int r1 = 2 * j, r2 = 2 * j + 1;
    a[r1][r1] = sys.lambda + sys.a11[j] + 2.0 * sys.d1 * ih2;
    a[r1][r2] = -sys.a12[j];
    a[r2][r2] = sys.lambda + sys.a22[j] + 2.0 * sys.d2 * ih2;
    a[r2][r1] = -sys.a21[j];
    if (j > 0) {
      const double w = (j == n) ? 2.0 : 1.0;
      a[r1][2 * (j - 1)] = -w * sys.d1 * ih2;
      a[r2][2 * (j - 1) + 1] = -w * sys.d2 * ih2;
    }
    if (j < n) {
      const double w = (j == 0) ? 2.0 : 1.0;
      a[r1][2 * (j + 1)] = -w * sys.d1 * ih2;
      a[r2][2 * (j + 1) + 1] = -w * sys.d2 * ih2;
    }
    a[r1][m] = f1[j];
    a[r2][m] = f2[j];
  }

  for (int col = 0; col < m; ++col) {
    int piv = col;
    for (int r = col + 1; r < m; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    std::swap(a[col], a[piv]);
    if (a[col][col] == 0.0) {
      throw std::runtime_error("dense_reference_solve: singular matrix");
    }
    for (int r = col + 1; r < m; ++r) {
      const double factor = a[r][col] / a[col][col];
      if (factor == 0.0) continue;
      for (int c = col; c <= m; ++c) a[r][c] -= factor * a[col][c];
    }
  }
  std::vector<double> x(m);
  for (int r = m - 1; r >= 0; --r) {
    double acc = a[r][m];
    for (int c = r + 1; c < m; ++c) acc -= a[r][c] * x[c];
    x[r] = acc / a[r][r];
  }
  Field u1(n + 1), u2(n + 1);
  for (int j = 0; j <= n; ++j) {
    u1[j] = x[2 * j];
    u2[j] = x[2 * j + 1];
  }
  return {std::move(u1), std::move(u2)};
}

VerificationReport run_verification(const RunConfig& cfg) {
  VerificationReport rep;
  const std::pair<const char*, void (*)(VerificationReport&, const RunConfig&)>
      sections[] = {{"grid", check_grid},
                    {"elliptic", [](VerificationReport& r, const RunConfig&) {
                       check_elliptic(r);
                     }},
                    {"steady", check_steady},
                    {"evolve", check_evolve}};
  for (const auto& [name, section] : sections) {
    try {
      section(rep, cfg);
    } catch (const std::exception& e) {
      // a thrown solver error fails the section but lets the rest report
      add(rep, std::string(name) + ".suite", false,
          std::string("aborted: ") + e.what());
    }
  }
  return rep;
}

}  // namespace morph

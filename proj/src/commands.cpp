#include "morph/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <memory>

#include "morph/evolve.hpp"
#include "morph/output.hpp"
#include "morph/verify.hpp"

namespace fs = std::filesystem;

namespace morph {

namespace {

// Tracks files written by one command; on failure the partial outputs are
// removed so a crashed run leaves nothing half-written behind.
class OutputGuard {
 public:
  ~OutputGuard() {
    if (armed_) {
      for (const std::string& p : paths_) {
        std::error_code ec;
        fs::remove(p, ec);
      }
    }
  }
  std::string track(std::string path) {
    paths_.push_back(path);
    return path;
  }
  void release() { armed_ = false; }

 private:
  std::vector<std::string> paths_;
  bool armed_ = true;
};

std::string out_path(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.output_dir);
  return (fs::path(cfg.output_dir) / name).string();
}

SteadySolution run_steady(const RunConfig& cfg, const Params& p, const Grid& g) {
  return cfg.mode == SteadyMode::DiscreteDelta ? solve_steady(p, g, cfg.steady)
                                               : solve_steady_split(p, g, cfg.steady);
}

std::string compact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// First x > 0 where u1 falls to half its center value (linear interpolation
// between nodes); NaN if it never does.
double half_decay_length(const Grid& g, const Field& u1) {
  const int j0 = g.origin_index;
  if (u1[j0] <= 0.0) return std::nan("");
  const double target = 0.5 * u1[j0];
  for (int j = j0 + 1; j <= g.n; ++j) {
    if (u1[j] <= target) {
      const double lo = u1[j - 1], hi = u1[j];
      if (lo == hi) return g.nodes[j];
      const double frac = (lo - target) / (lo - hi);
      return g.nodes[j - 1] + frac * g.h;
    }
  }
  return std::nan("");
}

Params with_scalar(const Params& p, const std::string& key, double value) {
  double d = p.d(), p1 = p.p1(), p3 = p.p3();
  std::array<double, 5> b = p.b(), c = p.c();
  if (key == "d") {
    d = value;
  } else if (key == "p1") {
    p1 = value;
  } else if (key == "p3") {
    p3 = value;
  } else if (key.size() == 2 && (key[0] == 'b' || key[0] == 'c') && key[1] >= '1' &&
             key[1] <= '5') {
    (key[0] == 'b' ? b : c)[key[1] - '1'] = value;
  } else {
    throw ConfigError("sweep key must be one of d, p1, p3, b1..b5, c1..c5; got '" +
                      key + "'");
  }
  try {
    return Params(d, b, c, p1, p3);
  } catch (const std::invalid_argument& err) {
    throw ConfigError("sweep value " + compact(value) + " for '" + key +
                      "' is invalid: " + err.what());
  }
}

// The configuration decouples to the scalar point-source problem when all
// couplings vanish and there is no receptor production; then
// u1 = p1 cosh(sqrt(b1)(1-|x|)) / (2 sqrt(b1) sinh(sqrt(b1))) in closed form.
bool has_closed_form(const Params& p) {
  return p.p3() == 0.0 &&
         std::all_of(p.c().begin(), p.c().end(), [](double v) { return v == 0.0; });
}

double closed_form_u1(const Params& p, double x) {
  const double r = std::sqrt(p.b1());
  return p.p1() * std::cosh(r * (1.0 - std::abs(x))) / (2.0 * r * std::sinh(r));
}

}  // namespace

void cmd_steady(const RunConfig& cfg) {
  const Grid g = build_grid(cfg.grid_n);
  const SteadySolution sol = run_steady(cfg, cfg.params, g);

  OutputGuard guard;
  write_profile_csv(guard.track(out_path(cfg, "steady.csv")), g, sol.u);
  if (cfg.emit_svg) {
    write_profiles_svg(guard.track(out_path(cfg, "steady.svg")), g, sol.u);
  }
  guard.release();

  std::cout << "steady (" << to_string(sol.mode) << "): converged in " << sol.iterations
            << " iterations, residual " << compact(sol.residual) << ", u1(0) = "
            << format_number(sol.u[0][g.origin_index]) << "\n";
  if (sol.clamped_nodes > 0) {
    std::cout << "note: " << sol.clamped_nodes
              << " node value(s) in (-1e-10, 0) clamped to zero\n";
  }
}

void cmd_evolve(const RunConfig& cfg) {
  const Grid g = build_grid(cfg.grid_n);

  bool have_ref = false;
  std::unique_ptr<SteadySolution> ref;
  try {
    ref = std::make_unique<SteadySolution>(run_steady(cfg, cfg.params, g));
    have_ref = true;
  } catch (const std::exception& err) {
    std::cerr << "warning: steady reference unavailable (" << err.what()
              << "); distance column will be nan\n";
  }

  State s0;
  s0.t = 0.0;
  for (auto& f : s0.u) f.assign(g.num_nodes(), 0.0);
  const Trajectory traj = simulate(s0, cfg.t_end, cfg.dt, cfg.params, g, cfg.stride,
                                   have_ref ? ref.get() : nullptr);

  OutputGuard guard;
  write_trajectory_csv(guard.track(out_path(cfg, "trajectory.csv")), traj);
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof(name), "profile_%06zu.csv", k);
    write_profile_csv(guard.track(out_path(cfg, name)), g, traj.snapshots[k].u);
  }
  guard.release();

  const Snapshot& last = traj.snapshots.back();
  std::cout << "evolve: " << traj.snapshots.size() << " snapshots to t = "
            << compact(last.t);
  if (last.has_ref) std::cout << ", final distance to steady " << compact(last.dist_to_ref);
  std::cout << "\n";
}

bool cmd_verify(const RunConfig& cfg) {
  const VerificationReport rep = run_verification(cfg);

  OutputGuard guard;
  const std::string path = guard.track(out_path(cfg, "report.txt"));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  for (const CheckResult& c : rep.checks) {
    const std::string line =
        std::string(c.passed ? "PASS" : "FAIL") + " " + c.name + ": " + c.detail;
    out << line << "\n";
    std::cout << line << "\n";
  }
  out << (rep.all_passed ? "ALL CHECKS PASSED" : "CHECKS FAILED") << "\n";
  std::cout << (rep.all_passed ? "ALL CHECKS PASSED" : "CHECKS FAILED") << "\n";
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
  guard.release();
  return rep.all_passed;
}

void cmd_sweep(const RunConfig& cfg, const std::string& key,
               const std::vector<double>& values) {
  if (values.empty()) throw ConfigError("sweep requires at least one value");
  const Grid g = build_grid(cfg.grid_n);

  struct Point {
    double value;
    SteadySolution sol;
  };
  std::vector<std::future<Point>> futures;
  futures.reserve(values.size());
  for (double v : values) {
    const Params pv = with_scalar(cfg.params, key, v);  // validate before launching
    futures.push_back(std::async(std::launch::async, [&cfg, &g, pv, v] {
      return Point{v, run_steady(cfg, pv, g)};
    }));
  }

  OutputGuard guard;
  std::vector<Point> points;
  points.reserve(values.size());
  for (auto& f : futures) points.push_back(f.get());

  for (const Point& pt : points) {
    write_profile_csv(
        guard.track(out_path(cfg, "steady_" + key + "_" + compact(pt.value) + ".csv")),
        g, pt.sol.u);
  }

  const std::string spath = guard.track(out_path(cfg, "summary.csv"));
  std::ofstream out(spath, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + spath + "'");
  out << key
      << ",u1_center,slope_u1,slope_u2,slope_u3,slope_u4,slope_u5,half_decay_x\n";
  for (const Point& pt : points) {
    const int j0 = g.origin_index;
    const double h = g.h;
    out << format_number(pt.value) << ','
        << format_number(pt.sol.u[0][j0]);
    for (int i = 0; i < 5; ++i) {
      const Field& f = pt.sol.u[i];
      const double slope = (-3.0 * f[j0] + 4.0 * f[j0 + 1] - f[j0 + 2]) / (2.0 * h);
      out << ',' << format_number(slope);
    }
    out << ',' << format_number(half_decay_length(g, pt.sol.u[0])) << '\n';
  }
  if (!out) throw std::runtime_error("failed writing '" + spath + "'");
  guard.release();
  std::cout << "sweep: " << points.size() << " point(s) over '" << key << "'\n";
}

void cmd_convergence(const RunConfig& cfg, const std::vector<int>& grids) {
  if (grids.size() < 2) throw ConfigError("convergence requires at least two grids");
  for (std::size_t i = 1; i < grids.size(); ++i) {
    if (grids[i] <= grids[i - 1]) {
      throw ConfigError("convergence grids must be strictly increasing");
    }
  }

  struct Row {
    int n;
    Grid grid;
    SteadySolution sol;
  };
  std::vector<Row> rows;
  for (int n : grids) {
    Grid g = build_grid(n);
    SteadySolution sol = run_steady(cfg, cfg.params, g);
    rows.push_back({n, std::move(g), std::move(sol)});
  }

  const bool oracle = has_closed_form(cfg.params);
  auto sample = [](const Grid& gf, const Field& f, double x) {
    // linear interpolation on the fine grid
    const double pos = (x + 1.0) / gf.h;
    int j = std::clamp(static_cast<int>(std::floor(pos)), 0, gf.n - 1);
    const double frac = pos - j;
    return (1.0 - frac) * f[j] + frac * f[j + 1];
  };

  std::vector<double> gap(rows.size(), std::nan(""));
  std::vector<double> oracle_err(rows.size(), std::nan(""));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Grid& g = rows[i].grid;
    if (i + 1 < rows.size()) {
      double worst = 0.0;
      for (int sp = 0; sp < 5; ++sp) {
        for (int j = 0; j <= g.n; ++j) {
          const double fine =
              sample(rows[i + 1].grid, rows[i + 1].sol.u[sp], g.nodes[j]);
          worst = std::max(worst, std::abs(rows[i].sol.u[sp][j] - fine));
        }
      }
      gap[i] = worst;
    }
    if (oracle) {
      double worst = 0.0, scale = 0.0;
      for (int j = 0; j <= g.n; ++j) {
        const double exact = closed_form_u1(cfg.params, g.nodes[j]);
        worst = std::max(worst, std::abs(rows[i].sol.u[0][j] - exact));
        scale = std::max(scale, std::abs(exact));
      }
      oracle_err[i] = worst / scale;
    }
  }

  OutputGuard guard;
  const std::string path = guard.track(out_path(cfg, "convergence.csv"));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  out << "n,h,u1_center,gap_to_next,order_gap,oracle_rel_err,order_oracle\n";
  std::printf("%8s %12s %16s %12s %9s %14s %9s\n", "n", "h", "u1(0)", "gap_next",
              "order", "oracle_err", "order");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double order_gap =
        (i > 0 && gap[i - 1] > 0.0 && gap[i] > 0.0) ? std::log2(gap[i - 1] / gap[i])
                                                    : std::nan("");
    const double order_oracle = (i > 0 && oracle_err[i - 1] > 0.0 && oracle_err[i] > 0.0)
                                    ? std::log2(oracle_err[i - 1] / oracle_err[i])
                                    : std::nan("");
    const Grid& g = rows[i].grid;
    out << rows[i].n << ',' << format_number(g.h) << ','
        << format_number(rows[i].sol.u[0][g.origin_index]) << ','
        << format_number(gap[i]) << ',' << format_number(order_gap) << ','
        << format_number(oracle_err[i]) << ',' << format_number(order_oracle) << '\n';
    std::printf("%8d %12.4e %16.10f %12.4e %9.3f %14.4e %9.3f\n", rows[i].n, g.h,
                rows[i].sol.u[0][g.origin_index], gap[i], order_gap, oracle_err[i],
                order_oracle);
  }
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
  guard.release();
}

}  // namespace morph

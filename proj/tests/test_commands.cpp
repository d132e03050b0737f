#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "morph/commands.hpp"
#include "morph/config.hpp"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("morph_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

morph::RunConfig small_config(const std::string& out_dir, const std::string& extra = "") {
  return morph::parse_config(
      "b = 100,10,10,10,10\nc = 10,10,1,10,10\np1 = 100\np3 = 100\nd = 0.1\n"
      "grid_n = 32\ndt = 0.01\nt_end = 0.2\nstride = 5\noutput_dir = " +
      out_dir + "\n" + extra);
}

}  // namespace

TEST_CASE("cmd_steady writes a deterministic profile table") {
  TempDir tmp;
  const morph::RunConfig cfg = small_config(tmp.path.string());
  morph::cmd_steady(cfg);

  const fs::path csv = tmp.path / "steady.csv";
  REQUIRE(fs::exists(csv));
  const std::string first = slurp(csv);
  CHECK(first.substr(0, 17) == "x,u1,u2,u3,u4,u5\n");

  // byte-identical on a second run
  morph::cmd_steady(cfg);
  CHECK(slurp(csv) == first);

  // 33 nodes + header
  CHECK(std::count(first.begin(), first.end(), '\n') == 34);
}

TEST_CASE("cmd_steady emits an SVG when asked") {
  TempDir tmp;
  morph::RunConfig cfg = small_config(tmp.path.string());
  cfg.emit_svg = true;
  morph::cmd_steady(cfg);
  const std::string svg = slurp(tmp.path / "steady.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(std::count(svg.begin(), svg.end(), '<') > 10);
}

TEST_CASE("cmd_evolve writes the trajectory table and per-snapshot profiles") {
  TempDir tmp;
  const morph::RunConfig cfg = small_config(tmp.path.string());
  morph::cmd_evolve(cfg);

  const std::string traj = slurp(tmp.path / "trajectory.csv");
  CHECK(traj.substr(0, traj.find('\n')) ==
        "t,sup3to5,l1_1,l1_2,l1_4,l1_5,bound6a,bound6b,dist_to_steady");
  // 20 steps, stride 5: snapshots at 0,5,10,15,20
  CHECK(std::count(traj.begin(), traj.end(), '\n') == 6);
  for (int k = 0; k < 5; ++k) {
    char name[32];
    std::snprintf(name, sizeof(name), "profile_%06d.csv", k);
    CHECK(fs::exists(tmp.path / name));
  }
  CHECK(!fs::exists(tmp.path / "profile_000005.csv"));
}

TEST_CASE("cmd_sweep writes one profile per value and a summary") {
  TempDir tmp;
  const morph::RunConfig cfg = small_config(tmp.path.string());
  morph::cmd_sweep(cfg, "p1", {50.0, 100.0});

  CHECK(fs::exists(tmp.path / "steady_p1_50.csv"));
  CHECK(fs::exists(tmp.path / "steady_p1_100.csv"));
  const std::string summary = slurp(tmp.path / "summary.csv");
  CHECK(summary.substr(0, summary.find('\n')) ==
        "p1,u1_center,slope_u1,slope_u2,slope_u3,slope_u4,slope_u5,half_decay_x");
  CHECK(std::count(summary.begin(), summary.end(), '\n') == 3);

  // center concentration grows with the source strength
  std::stringstream ss(summary);
  std::string header, row50, row100;
  std::getline(ss, header);
  std::getline(ss, row50);
  std::getline(ss, row100);
  const double u50 = std::stod(row50.substr(row50.find(',') + 1));
  const double u100 = std::stod(row100.substr(row100.find(',') + 1));
  CHECK(u100 > u50);
}

TEST_CASE("cmd_sweep validates the key") {
  TempDir tmp;
  const morph::RunConfig cfg = small_config(tmp.path.string());
  CHECK_THROWS_AS(morph::cmd_sweep(cfg, "grid_n", {64.0}), morph::ConfigError);
  CHECK_THROWS_AS(morph::cmd_sweep(cfg, "b6", {1.0}), morph::ConfigError);
  CHECK_THROWS_AS(morph::cmd_sweep(cfg, "b1", {}), morph::ConfigError);
}

TEST_CASE("cmd_convergence tabulates shrinking closed-form errors") {
  TempDir tmp;
  const morph::RunConfig cfg = morph::parse_config(
      "b = 1,1,1,1,1\nc = 0,0,0,0,0\np1 = 2\np3 = 0\nd = 1\n"
      "grid_n = 32\noutput_dir = " +
      tmp.path.string() + "\n");
  morph::cmd_convergence(cfg, {16, 32, 64});

  const std::string table = slurp(tmp.path / "convergence.csv");
  std::stringstream ss(table);
  std::string line;
  std::getline(ss, line);
  CHECK(line == "n,h,u1_center,gap_to_next,order_gap,oracle_rel_err,order_oracle");
  double prev_err = 1e9;
  int rows = 0;
  while (std::getline(ss, line)) {
    ++rows;
    std::stringstream row(line);
    std::string cell;
    for (int i = 0; i < 6; ++i) std::getline(row, cell, ',');
    const double err = std::stod(cell);
    CHECK(err < prev_err);
    prev_err = err;
  }
  CHECK(rows == 3);
}

TEST_CASE("cmd_convergence rejects non-increasing grid lists") {
  TempDir tmp;
  const morph::RunConfig cfg = small_config(tmp.path.string());
  CHECK_THROWS_AS(morph::cmd_convergence(cfg, {64, 32}), morph::ConfigError);
  CHECK_THROWS_AS(morph::cmd_convergence(cfg, {64}), morph::ConfigError);
}

TEST_CASE("cmd_evolve falls back to a nan distance column when steady fails") {
  TempDir tmp;
  // max_iter = 1 makes the steady reference unavailable; the run proceeds
  const morph::RunConfig cfg = small_config(tmp.path.string(), "max_iter = 1\n");
  morph::cmd_evolve(cfg);
  const std::string traj = slurp(tmp.path / "trajectory.csv");
  const std::string last = traj.substr(traj.rfind(',') + 1);
  CHECK(last.substr(0, 3) == "nan");
}

TEST_CASE("cmd_verify passes on the reference configuration and writes the report") {
  TempDir tmp;
  const morph::RunConfig cfg = morph::parse_config(
      "b = 100,10,10,10,10\nc = 10,10,1,10,10\np1 = 100\np3 = 100\nd = 0.1\n"
      "grid_n = 64\ndt = 0.01\nt_end = 0.5\nstride = 10\noutput_dir = " +
      tmp.path.string() + "\n");
  CHECK(morph::cmd_verify(cfg));
  const std::string report = slurp(tmp.path / "report.txt");
  CHECK(report.find("ALL CHECKS PASSED") != std::string::npos);
  CHECK(report.find("FAIL") == std::string::npos);
  // one line per check plus the verdict
  CHECK(std::count(report.begin(), report.end(), '\n') >= 20);
}

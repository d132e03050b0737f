#pragma once

#include <string>
#include <vector>

#include "morph/config.hpp"

namespace morph {

/// Exit codes shared by the CLI and the command layer.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitSolverFailure = 2,
  kExitVerificationFailure = 3,
};

/// Solves the steady state and writes steady.csv (and steady.svg when
/// requested) into cfg.output_dir.
void cmd_steady(const RunConfig& cfg);

/// Integrates from rest and writes trajectory.csv plus one profile file per
/// snapshot. The distance-to-steady column is filled when the steady solve
/// succeeds.
void cmd_evolve(const RunConfig& cfg);

/// Runs the invariant suite, writes report.txt, prints one line per check.
/// Returns true when every check passed.
bool cmd_verify(const RunConfig& cfg);

/// Re-solves the steady state for each value of one scalar parameter
/// (d, p1, p3, b1..b5, c1..c5), writing a profile per point and summary.csv.
/// Points run concurrently; outputs are written per point and the summary
/// once at the end.
void cmd_sweep(const RunConfig& cfg, const std::string& key,
               const std::vector<double>& values);

/// Steady solves across a list of grids; writes convergence.csv and prints
/// the table (cross-grid gaps, plus closed-form errors when the
/// configuration decouples to the point-source problem).
void cmd_convergence(const RunConfig& cfg, const std::vector<int>& grids);

}  // namespace morph

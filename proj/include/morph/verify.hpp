#pragma once

#include <random>
#include <string>
#include <vector>

#include "morph/config.hpp"
#include "morph/elliptic.hpp"

namespace morph {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool all_passed = true;
};

/// Runs the full invariant suite (mesh identities, resolvent properties,
/// steady-state checks on the configured parameters, evolution monitors).
/// Deterministic: randomized checks use fixed seeds.
VerificationReport run_verification(const RunConfig& cfg);

/// Reference solve of a BlockSystem by dense Gaussian elimination with
/// partial pivoting; builds its own matrix, independent of the banded sweep.
std::pair<Field, Field> dense_reference_solve(const BlockSystem& sys, const Field& f1,
                                              const Field& f2);

/// Random system satisfying the dominance condition, for resolvent checks.
BlockSystem random_dominant_system(std::mt19937_64& rng);

Field random_field(std::mt19937_64& rng, int num_nodes, double lo, double hi);

}  // namespace morph

#pragma once

#include <string>

#include "morph/evolve.hpp"
#include "morph/grid.hpp"
#include "morph/steady.hpp"

namespace morph {

/// One double, 17 significant digits ("%.17g"): round-trips exactly.
std::string format_number(double v);

/// Writes x,u1..u5 rows for a five-species profile.
void write_profile_csv(const std::string& path, const Grid& g,
                       const std::array<Field, 5>& u);

/// Writes the trajectory diagnostics table
/// (t, sup3to5, l1_1, l1_2, l1_4, l1_5, bound6a, bound6b, dist_to_steady).
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

/// Five stacked polyline panels, 800x400 each, one per species, profiles
/// normalized by their own sup-norm so shapes compare directly.
void write_profiles_svg(const std::string& path, const Grid& g,
                        const std::array<Field, 5>& u);

}  // namespace morph

#pragma once

#include <stdexcept>
#include <string>

#include "morph/model.hpp"
#include "morph/steady.hpp"

namespace morph {

/// Configuration or command-line usage problem; maps to exit code 1.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A fully validated run configuration. Built by parse_config.
struct RunConfig {
  Params params;
  int grid_n = 512;
  SteadyMode mode = SteadyMode::SingularSplit;
  double dt = 1e-3;
  double t_end = 10.0;
  int stride = 100;
  SteadyOptions steady;
  std::string output_dir = ".";
  bool emit_svg = false;
};

/// Parses a flat key = value document ('#' starts a comment, vector values
/// are comma-separated). Either the nondimensional keys b, c, p1, p3, d are
/// given directly, or `dimensional = true` together with the rate-constant
/// keys, in which case the parameters are nondimensionalized first.
/// Unknown keys are rejected; errors carry the line number or key name.
RunConfig parse_config(const std::string& text);

/// Convenience: reads the file and parses it. File problems throw ConfigError.
RunConfig parse_config_file(const std::string& path);

}  // namespace morph

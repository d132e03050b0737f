#include <CLI11.hpp>
#include <charconv>
#include <iostream>
#include <string>
#include <vector>

#include "morph/commands.hpp"
#include "morph/steady.hpp"

namespace {

std::vector<double> parse_value_list(const std::string& csv) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    const std::size_t comma = csv.find(',', pos);
    const std::string part =
        csv.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || ptr != part.data() + part.size() || part.empty()) {
      throw morph::ConfigError("cannot parse number '" + part + "' in list");
    }
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"morphsolve: steady and transient solver for the five-species "
               "morphogen transport system on [-1,1]"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  bool svg = false;
  std::string sweep_key;
  std::string sweep_values;
  std::string grids_csv = "128,256,512,1024";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "configuration file (key = value lines)")
        ->required();
    sub->add_option("--out", out_dir, "output directory (overrides config)");
    sub->add_flag("--svg", svg, "also write SVG plots where applicable");
  };

  CLI::App* steady = app.add_subcommand("steady", "compute the steady state");
  add_common(steady);
  CLI::App* evolve = app.add_subcommand("evolve", "integrate the transient system");
  add_common(evolve);
  CLI::App* verify = app.add_subcommand("verify", "run the verification suite");
  add_common(verify);
  CLI::App* sweep = app.add_subcommand("sweep", "steady states over a parameter range");
  add_common(sweep);
  sweep->add_option("--key", sweep_key, "scalar parameter (d, p1, p3, b1..b5, c1..c5)")
      ->required();
  sweep->add_option("--values", sweep_values, "comma-separated values")->required();
  CLI::App* convergence =
      app.add_subcommand("convergence", "steady-state grid refinement table");
  add_common(convergence);
  convergence->add_option("--grids", grids_csv, "comma-separated even grid sizes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return morph::kExitUsage;
  }

  try {
    morph::RunConfig cfg = morph::parse_config_file(config_path);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (svg) cfg.emit_svg = true;

    if (app.got_subcommand(steady)) {
      morph::cmd_steady(cfg);
    } else if (app.got_subcommand(evolve)) {
      morph::cmd_evolve(cfg);
    } else if (app.got_subcommand(verify)) {
      if (!morph::cmd_verify(cfg)) return morph::kExitVerificationFailure;
    } else if (app.got_subcommand(sweep)) {
      morph::cmd_sweep(cfg, sweep_key, parse_value_list(sweep_values));
    } else if (app.got_subcommand(convergence)) {
      std::vector<int> grids;
      for (double v : parse_value_list(grids_csv)) grids.push_back(static_cast<int>(v));
      morph::cmd_convergence(cfg, grids);
    }
  } catch (const morph::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return morph::kExitUsage;
  } catch (const morph::ConvergenceError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return morph::kExitSolverFailure;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return morph::kExitSolverFailure;
  }
  return morph::kExitOk;
}

// jmgt-lab: config-driven experiments for the third-order nonlinear acoustic model.
//
//   jmgt-lab <subcommand> --config <path> [--out <dir>] [--quiet]
//
// Exit codes: 0 success, 1 configuration error, 2 solver failure.

#include <CLI11.hpp>
#include <iostream>
#include <map>
#include <sstream>

#include "jmgt/config.hpp"
#include "jmgt/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Spectral-Galerkin laboratory for the JMGT and Westervelt equations"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_dir;
  bool quiet = false;
  const std::map<std::string, std::string> descriptions = {
      {"solve-linear", "linear third-order solve with alpha = 1, plus energy audits"},
      {"solve-jmgt", "nonlinear third-order solve by fixed-point iteration"},
      {"solve-relaxed", "nonlinear solve with the clamped coefficient"},
      {"solve-westervelt", "nonlinear second-order (tau = 0) solve"},
      {"limit-study", "compare the third-order model against the tau = 0 reference over tau_sweep"},
      {"energy-audit", "energy totals and estimate ratios over tau_sweep"},
      {"mms", "manufactured-solution convergence at dt, dt/2, dt/4"},
  };
  for (const auto& name : jmgt::subcommands()) {
    auto* sub = app.add_subcommand(name, descriptions.at(name));
    sub->add_option("--config", config_path, "configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (default: ./out or experiment.output)");
    sub->add_flag("--quiet", quiet, "suppress progress output");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const std::string subcommand = app.get_subcommands().front()->get_name();
  std::ostringstream sink;
  std::ostream& log = quiet ? static_cast<std::ostream&>(sink) : std::cerr;

  try {
    const jmgt::ExperimentConfig config = jmgt::parse_config(config_path);
    for (const auto& w : config.warnings) log << "warning: " << w << "\n";
    const std::string dir = out_dir.empty() ? config.output_dir : out_dir;
    return jmgt::run(subcommand, config, dir, log);
  } catch (const jmgt::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const jmgt::SolverFailure& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

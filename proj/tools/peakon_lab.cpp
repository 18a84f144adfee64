#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "peakon/cli/config.hpp"
#include "peakon/cli/scenarios.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "Peakon perturbation laboratory: linearized and nonlinear characteristic solvers, "
      "multipeakon dynamics and self-checks."};
  std::string config_path;
  std::string scenario;
  auto* config_opt = app.add_option("config", config_path, "JSON scenario configuration");
  auto* scenario_opt = app.add_option("--scenario", scenario, "Run a scenario with default settings");
  config_opt->excludes(scenario_opt);
  scenario_opt->excludes(config_opt);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : peakon::cli::exit_config_error;
  }
  if (config_path.empty() && scenario.empty()) {
    std::cerr << app.help();
    return peakon::cli::exit_config_error;
  }

  peakon::cli::ScenarioConfig config;
  try {
    if (!config_path.empty()) {
      config = peakon::cli::load_config(config_path);
    } else {
      config.scenario = peakon::cli::parse_scenario(scenario);
    }
  } catch (const peakon::ConfigurationError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return peakon::cli::exit_config_error;
  }
  peakon::cli::apply_environment(config);
  return peakon::cli::run(config, std::cout, std::cerr);
}

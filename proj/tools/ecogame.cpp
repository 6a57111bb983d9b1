#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ecogame/commands.hpp"
#include "ecogame/config.hpp"

int main(int argc, char** argv) {
  using namespace ecogame;

  CLI::App app{
      "Replicator dynamics with environmental and opinion feedback for 2x2 "
      "games"};
  app.require_subcommand(1);

  std::string config;
  std::vector<std::string> overrides;
  auto add_config = [&](CLI::App* cmd) {
    cmd->add_option("--config", config, "Scenario file (key = value)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--set", overrides, "Override a config key: KEY=VALUE");
  };

  auto* simulate = app.add_subcommand("simulate", "Integrate one scenario");
  add_config(simulate);
  SimulateOutputs sim_out;
  std::string sim_json, sim_svg;
  simulate->add_option("--out-csv", sim_out.csv, "Trajectory CSV")->required();
  simulate->add_option("--out-json", sim_json, "Summary JSON");
  simulate->add_option("--out-svg", sim_svg, "Line chart of x, n, y");

  auto* sweep = app.add_subcommand("sweep", "Basin scan over an initial value");
  add_config(sweep);
  std::string axis_text, grid_text, sweep_json;
  SweepOutputs sweep_out;
  unsigned threads = 0;
  sweep->add_option("--axis", axis_text, "x0, n0 or y0")
      ->required()
      ->check(CLI::IsMember({"x0", "n0", "y0"}));
  sweep->add_option("--grid", grid_text, "lo:hi:count")->required();
  sweep->add_option("--out-csv", sweep_out.csv, "Basin CSV")->required();
  sweep->add_option("--out-json", sweep_json, "Sweep summary JSON");
  sweep->add_option("--threads", threads, "Worker threads (0 = all cores)");

  auto* fixed = app.add_subcommand("fixed-points", "List verified equilibria");
  add_config(fixed);
  std::string fixed_json;
  fixed->add_option("--out-json", fixed_json, "Fixed point list")->required();

  auto* preset = app.add_subcommand("preset", "Write a shipped scenario file");
  std::string preset_name, preset_path;
  preset->add_option("name", preset_name, "hawk-dove or prisoners-dilemma")
      ->required()
      ->check(CLI::IsMember({"hawk-dove", "prisoners-dilemma"}));
  preset->add_option("--write", preset_path, "Destination")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (preset->parsed()) return run_preset(preset_name, preset_path, std::cerr);

    const Scenario scenario = load_config(config, overrides);
    if (simulate->parsed()) {
      if (!sim_json.empty()) sim_out.json = sim_json;
      if (!sim_svg.empty()) sim_out.svg = sim_svg;
      return run_simulate(scenario, sim_out, std::cerr);
    }
    if (sweep->parsed()) {
      if (!sweep_json.empty()) sweep_out.json = sweep_json;
      return run_sweep(scenario, parse_axis(axis_text), parse_grid(grid_text),
                       sweep_out, std::cerr, threads);
    }
    return run_fixed_points(scenario, fixed_json, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

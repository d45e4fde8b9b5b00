/*
 * Copyright 2026 The Formation Design Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "formation/cli/commands.hpp"

namespace {

using namespace formation::cli;

void add_common(CLI::App* app, CommonOptions& common) {
  app->add_option("--config", common.config, "Scenario JSON file");
  app->add_option("--preset", common.preset, "Bundled scenario (sim5, bridge7, exp3plus2)");
  app->add_option("--seed", common.seed, "Master seed override");
  app->add_option("--jobs", common.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app->add_option("--out", common.out, "Output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-robot formation design and coverage simulation"};
  app.require_subcommand(1);

  CommonOptions common;
  std::string cost = "cov";
  HeatmapOptions heat;
  std::vector<double> range;
  std::string formation_file;
  bool dump = false;
  MonteCarloOptions mc;
  std::string preset_name;

  CLI::App* optimize = app.add_subcommand("optimize", "Minimize a formation cost");
  add_common(optimize, common);
  optimize->add_option("--cost", cost, "adj | opt | cov")
      ->check(CLI::IsMember({"adj", "opt", "cov"}));

  CLI::App* construct =
      app.add_subcommand("construct", "Write the exact straight-line (J_adj = 0) formation");
  add_common(construct, common);

  CLI::App* heatmap = app.add_subcommand("heatmap", "Scan one robot's position over a grid");
  add_common(heatmap, common);
  heatmap->add_option("--formation", heat.formation_file, "Formation file to scan around");
  heatmap->add_option("--term", heat.term, "adj | overlap | est | col | opt | cov");
  heatmap->add_option("--robot", heat.robot, "Swept robot id (default N)");
  heatmap->add_option("--range", range, "x_min x_max y_min y_max")->expected(4);
  heatmap->add_option("--resolution", heat.resolution, "Grid points per axis");

  CLI::App* simulate = app.add_subcommand("simulate", "Run one coverage simulation");
  add_common(simulate, common);
  simulate->add_option("--formation", formation_file, "Formation file")->required();
  simulate->add_flag("--dump-trajectories", dump, "Write a trajectory CSV");

  CLI::App* montecarlo = app.add_subcommand("montecarlo", "Monte Carlo comparison");
  add_common(montecarlo, common);
  montecarlo->add_option("--formations", mc.formation_files, "Formation files")->required();
  montecarlo->add_option("--trials", mc.trials, "Trials per formation");
  montecarlo->add_flag("--dump-trajectories", mc.dump_trajectories,
                       "Write the first trial's trajectory per formation");

  CLI::App* bridge = app.add_subcommand("bridge-demo", "Seven-robot bridge layout");
  add_common(bridge, common);

  CLI::App* preset = app.add_subcommand("preset", "Print a bundled scenario document");
  preset->add_option("name", preset_name, "Preset name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  if (*optimize) return cmd_optimize(common, parse_cost_kind(cost), std::cout, std::cerr);
  if (*construct) return cmd_construct(common, std::cout, std::cerr);
  if (*heatmap) {
    if (!range.empty()) {
      heat.x_min = range[0];
      heat.x_max = range[1];
      heat.y_min = range[2];
      heat.y_max = range[3];
    }
    return cmd_heatmap(common, heat, std::cout, std::cerr);
  }
  if (*simulate) return cmd_simulate(common, formation_file, dump, std::cout, std::cerr);
  if (*montecarlo) return cmd_montecarlo(common, mc, std::cout, std::cerr);
  if (*bridge) return cmd_bridge_demo(common, std::cout, std::cerr);
  if (*preset) {
    try {
      std::cout << preset_document(preset_name) << "\n";
    } catch (const ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return kExitConfigError;
    }
  }
  return kExitOk;
}

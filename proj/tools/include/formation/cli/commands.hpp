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

#ifndef FORMATION_CLI_COMMANDS_HPP_
#define FORMATION_CLI_COMMANDS_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "formation/cli/scenario.hpp"

namespace formation::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 1,
  kExitIncomplete = 2,  // non-convergence or incomplete coverage
};

struct CommonOptions {
  std::string config;            // scenario file; empty selects `preset`
  std::string preset = "sim5";
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::string out = ".";
};

Scenario resolve_scenario(const CommonOptions& options);

/// Multi-start minimization of the chosen cost. Robot ids are sorted per
/// restart from that restart's initial state.
FormationResult optimize_formation(const Scenario& scenario, CostKind kind, int jobs = 1);

/// Exact J_adj minimizer: every robot on its desired offset, identity
/// sorting, zero headings.
FormationResult construct_adjacent(const Scenario& scenario);

struct HeatmapOptions {
  std::string formation_file;  // empty uses construct_adjacent
  std::string term = "cov";    // adj | overlap | est | col | opt | cov
  RobotId robot = 0;           // 0 selects robot N
  double x_min = -2.0, x_max = 6.0, y_min = -3.0, y_max = 3.0;
  int resolution = 81;
};

struct HeatmapCell {
  double x = 0.0;
  double y = 0.0;
  double value = 0.0;
};

/// Cost with one robot's position swept over a grid, all other poses (and
/// the swept robot's heading) held fixed. Row-major, y outer. Cells where
/// the cost is undefined (coincident robots) hold NaN.
std::vector<HeatmapCell> heatmap(const Scenario& scenario, const FormationResult& formation,
                                 const HeatmapOptions& options);

std::string trial_json_line(const TrialRecord& trial);
std::string trajectory_csv(const SimOutput& output);

struct MonteCarloOptions {
  std::vector<std::string> formation_files;
  int trials = 20;
  bool dump_trajectories = false;
};

// Each returns an ExitCode; diagnostics go to `err`, summaries to `out`.
int cmd_optimize(const CommonOptions& common, CostKind kind, std::ostream& out,
                 std::ostream& err);
int cmd_construct(const CommonOptions& common, std::ostream& out, std::ostream& err);
int cmd_heatmap(const CommonOptions& common, const HeatmapOptions& options,
                std::ostream& out, std::ostream& err);
int cmd_simulate(const CommonOptions& common, const std::string& formation_file,
                 bool dump_trajectories, std::ostream& out, std::ostream& err);
int cmd_montecarlo(const CommonOptions& common, const MonteCarloOptions& options,
                   std::ostream& out, std::ostream& err);
int cmd_bridge_demo(const CommonOptions& common, std::ostream& out, std::ostream& err);

}  // namespace formation::cli

#endif  // FORMATION_CLI_COMMANDS_HPP_

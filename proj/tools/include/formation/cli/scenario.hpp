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

#ifndef FORMATION_CLI_SCENARIO_HPP_
#define FORMATION_CLI_SCENARIO_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "formation/costs.hpp"
#include "formation/optimizer.hpp"
#include "formation/simulation.hpp"
#include "formation/team.hpp"

namespace formation::cli {

/// Invalid scenario or result document. `path()` names the offending field,
/// e.g. "formation.directions[2]".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path.empty() ? message : path + ": " + message),
        path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct Scenario {
  std::string name = "custom";
  TeamConfig team;
  RangeGraph graph;  // robot-id masks already applied
  // Pairs of sorted slots (1-based) whose robots share no range edges. The
  // robots behind the slots are only known once ids have been sorted.
  std::vector<std::pair<int, int>> slot_masks;
  FormationSpec formation;
  OptimizerConfig optimizer;
  MultiStartConfig multistart;
  SimConfig sim;
  std::uint64_t seed = 1;
};

Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);

std::vector<std::string> preset_names();
// The bundled document, as it would appear in a config file.
std::string preset_document(const std::string& name);
Scenario load_preset(const std::string& name);

// Overrides the master seed everywhere it is consumed.
void set_seed(Scenario& scenario, std::uint64_t seed);

// Graph with the slot masks resolved for one robot ordering.
RangeGraph resolve_graph(const Scenario& scenario, const SortedIds& sorted);

// Robots on either side of a slot mask (these carry GPS in the bridge layout).
std::vector<RobotId> slot_mask_robots(const Scenario& scenario,
                                      const SortedIds& sorted);

enum class CostKind { kAdj, kOpt, kCov };

CostKind parse_cost_kind(const std::string& name);
std::string cost_kind_name(CostKind kind);

/// A formation written by `optimize`/`construct` and read by the simulation
/// commands.
struct FormationResult {
  std::string id;    // e.g. "x_cov"
  std::string cost;  // adj | opt | cov
  std::string scenario;
  FormationState state;
  SortedIds sorted;
  CostBreakdown breakdown;
  bool converged = true;
  int iterations = 0;
  std::string diagnostic;
  int best_restart = 0;
  std::vector<double> restart_costs;
  std::vector<RobotId> gps_robots;
  std::uint64_t seed = 0;
};

std::string formation_to_json(const FormationResult& result);
FormationResult formation_from_json(const std::string& json_text);
void write_formation_file(const std::string& path, const FormationResult& result);
FormationResult read_formation_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace formation::cli

#endif  // FORMATION_CLI_SCENARIO_HPP_

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

#include "formation/cli/commands.hpp"

#include <cmath>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "formation/assignment.hpp"
#include "formation/costs.hpp"
#include "formation/optimizer.hpp"
#include "formation/simulation.hpp"
#include "json.hpp"

namespace formation::cli {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

std::string out_path(const CommonOptions& common, const std::string& file) {
  fs::create_directories(common.out);
  return (fs::path(common.out) / file).string();
}

std::ostream& precise(std::ostream& os) { return os << std::setprecision(17); }

json metric_json(const MetricSummary& m) {
  return {{"median", m.median}, {"p25", m.p25}, {"p75", m.p75}, {"count", m.count}};
}

json summary_json(const MonteCarloSummary& s) {
  json lm = json::array(), lm_x = json::array();
  for (const MetricSummary& m : s.landmark_errors) lm.push_back(metric_json(m));
  for (const MetricSummary& m : s.landmark_errors_excl) lm_x.push_back(metric_json(m));
  return {{"formation_id", s.formation_id},
          {"trials", s.trials},
          {"incomplete", s.incomplete},
          {"diverged", s.diverged},
          {"coverage_time", metric_json(s.coverage_time)},
          {"interrobot_att_rmse", metric_json(s.att_rmse)},
          {"interrobot_pos_rmse", metric_json(s.pos_rmse)},
          {"landmark_errors", lm},
          {"nees_containment", metric_json(s.nees_containment)},
          {"excluding_diverged",
           {{"interrobot_att_rmse", metric_json(s.att_rmse_excl)},
            {"interrobot_pos_rmse", metric_json(s.pos_rmse_excl)},
            {"landmark_errors", lm_x}}}};
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::out_of_range& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const fs::filesystem_error& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
}

void print_formation(std::ostream& out, const FormationResult& r) {
  out << r.id << ": cost " << r.breakdown.total << " (adj " << r.breakdown.adj
      << ", overlap " << r.breakdown.overlap << ", est " << r.breakdown.est << ", col "
      << r.breakdown.col << "), " << (r.converged ? "converged" : "not converged")
      << " after " << r.iterations << " iterations\n";
}

}  // namespace

Scenario resolve_scenario(const CommonOptions& options) {
  Scenario s = options.config.empty() ? load_preset(options.preset)
                                      : load_scenario(options.config);
  if (options.seed) set_seed(s, *options.seed);
  return s;
}

FormationResult optimize_formation(const Scenario& scenario, CostKind kind, int jobs) {
  const TeamConfig& team = scenario.team;
  const FormationSpec& spec = scenario.formation;
  const auto make_cost = [&](const FormationState& x0) -> CostFunction {
    const SortedIds sorted = sort_robot_ids(x0, team, spec.directions);
    const RangeGraph graph = resolve_graph(scenario, sorted);
    switch (kind) {
      case CostKind::kAdj:
        return [spec, sorted](const FormationState& x) { return j_adj(x, spec, sorted); };
      case CostKind::kOpt:
        return [&team, spec, graph](const FormationState& x) {
          return j_opt(x, team, graph, spec).total;
        };
      case CostKind::kCov:
        break;
    }
    return [&team, spec, graph, sorted](const FormationState& x) {
      return j_cov(x, team, graph, spec, sorted).total;
    };
  };
  MultiStartConfig ms = scenario.multistart;
  ms.jobs = jobs;
  const MultiStartResult best = multi_start(make_cost, team.robot_count(), scenario.optimizer, ms);

  FormationResult r;
  r.cost = cost_kind_name(kind);
  r.id = "x_" + r.cost;
  r.scenario = scenario.name;
  r.seed = scenario.seed;
  r.state = best.best.final_state;
  r.sorted = sort_robot_ids(best.best_x0, team, spec.directions);
  r.breakdown = j_cov(r.state, team, resolve_graph(scenario, r.sorted), spec, r.sorted);
  r.breakdown.total = best.best.final_cost;
  r.converged = best.best.converged;
  r.iterations = static_cast<int>(best.best.iterates.size());
  r.diagnostic = best.best.diagnostic;
  r.best_restart = best.best_restart;
  r.restart_costs = best.final_costs;
  r.gps_robots = slot_mask_robots(scenario, r.sorted);
  return r;
}

FormationResult construct_adjacent(const Scenario& scenario) {
  const int n = scenario.team.robot_count();
  FormationResult r;
  r.cost = "adj";
  r.id = "x_adj";
  r.scenario = scenario.name;
  r.seed = scenario.seed;
  r.sorted = SortedIds::Identity(scenario.team);
  std::vector<Pose2> poses;
  for (int slot = 2; slot <= n; ++slot) {
    poses.push_back(Pose2::FromAngle(0.0, desired_offset(scenario.formation, r.sorted, 1, slot)));
  }
  r.state = FormationState(std::move(poses));
  r.breakdown = j_cov(r.state, scenario.team, resolve_graph(scenario, r.sorted),
                      scenario.formation, r.sorted);
  r.breakdown.total = j_adj(r.state, scenario.formation, r.sorted);
  r.gps_robots = slot_mask_robots(scenario, r.sorted);
  return r;
}

std::vector<HeatmapCell> heatmap(const Scenario& scenario, const FormationResult& formation,
                                 const HeatmapOptions& options) {
  const int n = scenario.team.robot_count();
  if (formation.state.robot_count() != n) {
    throw ConfigError("formation", "formation and scenario robot counts differ");
  }
  const RobotId robot = options.robot == 0 ? n : options.robot;
  if (robot < 2 || robot > n) {
    throw ConfigError("robot", "swept robot must be in 2..N (robot 1 is the reference)");
  }
  if (options.resolution < 2) throw ConfigError("resolution", "must be >= 2");
  if (!(options.x_max > options.x_min && options.y_max > options.y_min)) {
    throw ConfigError("range", "empty grid range");
  }
  const SortedIds& sorted = formation.sorted;
  const RangeGraph graph = resolve_graph(scenario, sorted);
  const FormationSpec& spec = scenario.formation;
  const TeamConfig& team = scenario.team;
  const std::string& term = options.term;
  const auto evaluate = [&](const FormationState& x) -> double {
    if (term == "adj") return j_adj(x, spec, sorted);
    if (term == "overlap") return j_overlap(x, spec, sorted);
    if (term == "est") return j_est(x, team, graph);
    if (term == "col") return j_col(x, spec);
    if (term == "opt") return j_opt(x, team, graph, spec).total;
    if (term == "cov") return j_cov(x, team, graph, spec, sorted).total;
    throw ConfigError("term", "expected adj, overlap, est, col, opt or cov");
  };
  evaluate(formation.state);

  std::vector<HeatmapCell> cells;
  const int res = options.resolution;
  FormationState x = formation.state;
  Pose2& swept = x.mutable_poses()[static_cast<std::size_t>(robot - 2)];
  const Mat2 C = swept.C();
  for (int iy = 0; iy < res; ++iy) {
    const double y = options.y_min + (options.y_max - options.y_min) * iy / (res - 1);
    for (int ix = 0; ix < res; ++ix) {
      const double px = options.x_min + (options.x_max - options.x_min) * ix / (res - 1);
      swept = Pose2(C, Vec2(px, y));
      double value = std::numeric_limits<double>::quiet_NaN();
      try {
        value = evaluate(x);
      } catch (const DegeneratePairError&) {
      }
      cells.push_back({px, y, value});
    }
  }
  return cells;
}

std::string trial_json_line(const TrialRecord& t) {
  const SimMetrics& m = t.metrics;
  const json doc = {{"formation_id", t.formation_id},
                    {"trial", t.trial},
                    {"seed", t.seed},
                    {"completed", m.completed},
                    {"diverged", m.diverged},
                    {"coverage_time", m.coverage_time},
                    {"interrobot_att_rmse", m.interrobot_att_rmse},
                    {"interrobot_pos_rmse", m.interrobot_pos_rmse},
                    {"landmark_errors", m.landmark_errors},
                    {"nees_containment", m.nees_containment},
                    {"containment_samples", m.containment_samples},
                    {"rejected_updates", m.rejected_updates},
                    {"min_covariance_eigenvalue", m.min_covariance_eigenvalue},
                    {"max_asymmetry", m.max_asymmetry}};
  return doc.dump();
}

std::string trajectory_csv(const SimOutput& output) {
  std::ostringstream os;
  precise(os);
  if (output.trajectory.empty()) return "t\n";
  const TrajectoryRow& first = output.trajectory.front();
  os << "t";
  for (std::size_t k = 0; k < first.truth.size(); ++k) {
    const std::string p = "r" + std::to_string(k + 1) + "_";
    os << "," << p << "true_x," << p << "true_y," << p << "true_theta," << p << "est_x," << p
       << "est_y," << p << "est_theta";
  }
  for (std::size_t l = 0; l < first.landmark_estimate.size(); ++l) {
    const std::string p = "l" + std::to_string(l + 1) + "_";
    os << "," << p << "est_x," << p << "est_y," << p << "3sigma_x," << p << "3sigma_y";
  }
  os << "\n";
  for (const TrajectoryRow& row : output.trajectory) {
    os << row.t;
    for (std::size_t k = 0; k < row.truth.size(); ++k) {
      os << "," << row.truth[k].r().x() << "," << row.truth[k].r().y() << ","
         << row.truth[k].angle() << "," << row.estimate[k].r().x() << ","
         << row.estimate[k].r().y() << "," << row.estimate[k].angle();
    }
    for (std::size_t l = 0; l < row.landmark_estimate.size(); ++l) {
      os << "," << row.landmark_estimate[l].x() << "," << row.landmark_estimate[l].y() << ","
         << row.landmark_three_sigma[l].x() << "," << row.landmark_three_sigma[l].y();
    }
    os << "\n";
  }
  return os.str();
}

int cmd_optimize(const CommonOptions& common, CostKind kind, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&] {
    const Scenario s = resolve_scenario(common);
    const FormationResult r = optimize_formation(s, kind, common.jobs);
    const std::string path = out_path(common, "formation_" + r.cost + ".json");
    write_formation_file(path, r);
    precise(out);
    print_formation(out, r);
    out << "wrote " << path << "\n";
    if (!r.converged) {
      err << "optimizer did not converge: " << r.diagnostic << "\n";
      return static_cast<int>(kExitIncomplete);
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_construct(const CommonOptions& common, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario s = resolve_scenario(common);
    const FormationResult r = construct_adjacent(s);
    const std::string path = out_path(common, "formation_adj.json");
    write_formation_file(path, r);
    precise(out);
    print_formation(out, r);
    out << "wrote " << path << "\n";
    return static_cast<int>(kExitOk);
  });
}

int cmd_heatmap(const CommonOptions& common, const HeatmapOptions& options,
                std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario s = resolve_scenario(common);
    const FormationResult f = options.formation_file.empty()
                                  ? construct_adjacent(s)
                                  : read_formation_file(options.formation_file);
    const std::vector<HeatmapCell> cells = heatmap(s, f, options);
    std::ostringstream csv;
    precise(csv);
    csv << "x,y,cost\n";
    for (const HeatmapCell& c : cells) csv << c.x << "," << c.y << "," << c.value << "\n";
    const std::string path = out_path(common, "heatmap_" + options.term + ".csv");
    write_text_file(path, csv.str());
    out << "wrote " << path << " (" << cells.size() << " cells)\n";
    return static_cast<int>(kExitOk);
  });
}

int cmd_simulate(const CommonOptions& common, const std::string& formation_file,
                 bool dump_trajectories, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario s = resolve_scenario(common);
    const FormationResult f = read_formation_file(formation_file);
    if (f.state.robot_count() != s.team.robot_count()) {
      throw ConfigError("formation", "formation and scenario robot counts differ");
    }
    const RangeGraph graph = resolve_graph(s, f.sorted);
    const SimOutput o =
        run_coverage_sim(s.sim, s.team, graph, f.state, dump_trajectories ? 10 : 0);
    const std::string id = f.id.empty() ? "formation" : f.id;
    TrialRecord rec{0, s.sim.seed, id, o.metrics};
    const std::string path = out_path(common, "sim_" + id + ".json");
    write_text_file(path, trial_json_line(rec) + "\n");
    if (dump_trajectories) {
      write_text_file(out_path(common, "trajectory_" + id + ".csv"), trajectory_csv(o));
    }
    precise(out);
    out << id << ": coverage " << o.metrics.coverage_time << " s, att rmse "
        << o.metrics.interrobot_att_rmse << " rad, pos rmse " << o.metrics.interrobot_pos_rmse
        << " m\nwrote " << path << "\n";
    if (!o.metrics.completed) {
      err << "coverage incomplete after " << s.sim.max_sim_time << " s\n";
      return static_cast<int>(kExitIncomplete);
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_montecarlo(const CommonOptions& common, const MonteCarloOptions& options,
                   std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (options.formation_files.empty()) {
      throw ConfigError("formations", "at least one formation file is required");
    }
    if (options.trials < 1) throw ConfigError("trials", "must be >= 1");
    const Scenario s = resolve_scenario(common);
    std::vector<FormationResult> formations;
    for (const std::string& file : options.formation_files) {
      formations.push_back(read_formation_file(file));
      FormationResult& f = formations.back();
      if (f.state.robot_count() != s.team.robot_count()) {
        throw ConfigError("formations", file + ": robot count differs from the scenario");
      }
      if (f.id.empty()) f.id = fs::path(file).stem().string();
    }

    std::ostringstream lines;
    json summaries = json::array();
    std::vector<MonteCarloSummary> all;
    int incomplete = 0;
    for (const FormationResult& f : formations) {
      const RangeGraph graph = resolve_graph(s, f.sorted);
      const MonteCarloResult mc =
          monte_carlo(s.sim, s.team, graph, f.state, options.trials, f.id, common.jobs);
      for (const TrialRecord& t : mc.trials) lines << trial_json_line(t) << "\n";
      summaries.push_back(summary_json(mc.summary));
      all.push_back(mc.summary);
      incomplete += mc.summary.incomplete;
      if (options.dump_trajectories) {
        SimConfig first = s.sim;
        first.seed = mc.trials.front().seed;
        write_text_file(out_path(common, "trajectory_" + f.id + ".csv"),
                        trajectory_csv(run_coverage_sim(first, s.team, graph, f.state, 10)));
      }
    }

    // Percentage reduction in median error relative to x_adj (or the first
    // formation when no x_adj is given).
    std::size_t ref = 0;
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (all[i].formation_id == "x_adj") ref = i;
    }
    json table = json::object();
    std::ostringstream csv;
    precise(csv);
    csv << "metric";
    for (const MonteCarloSummary& m : all) csv << "," << m.formation_id;
    csv << "\n";
    const auto add_row = [&](const std::string& name, auto get) {
      csv << name;
      for (const MonteCarloSummary& m : all) {
        const double v = percentage_reduction(get(all[ref]), get(m));
        table[m.formation_id][name] = v;
        csv << "," << v;
      }
      csv << "\n";
    };
    for (std::size_t l = 0; l < s.sim.landmark_positions.size(); ++l) {
      add_row("landmark_" + std::to_string(l + 1),
              [l](const MonteCarloSummary& m) { return m.landmark_errors[l].median; });
    }
    add_row("interrobot_att_rmse",
            [](const MonteCarloSummary& m) { return m.att_rmse.median; });
    add_row("interrobot_pos_rmse",
            [](const MonteCarloSummary& m) { return m.pos_rmse.median; });
    add_row("coverage_time",
            [](const MonteCarloSummary& m) { return m.coverage_time.median; });

    const json doc = {{"scenario", s.name},
                      {"seed", s.seed},
                      {"trials", options.trials},
                      {"reference", all[ref].formation_id},
                      {"formations", summaries},
                      {"percentage_reduction", table}};
    const std::string metrics_path = out_path(common, "montecarlo_trials.jsonl");
    write_text_file(metrics_path, lines.str());
    write_text_file(out_path(common, "montecarlo_summary.json"), doc.dump(2) + "\n");
    write_text_file(out_path(common, "montecarlo_table.csv"), csv.str());

    precise(out);
    for (const MonteCarloSummary& m : all) {
      out << m.formation_id << ": median coverage " << m.coverage_time.median << " s, att "
          << m.att_rmse.median << " rad, pos " << m.pos_rmse.median << " m, diverged "
          << m.diverged << "/" << m.trials << "\n";
    }
    out << "wrote " << metrics_path << "\n";
    if (incomplete > 0) {
      err << incomplete << " trial(s) did not complete coverage and were excluded\n";
      return static_cast<int>(kExitIncomplete);
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_bridge_demo(const CommonOptions& common, std::ostream& out, std::ostream& err) {
  CommonOptions options = common;
  if (options.config.empty()) options.preset = "bridge7";
  return guarded(err, [&] {
    const Scenario s = resolve_scenario(options);
    if (s.team.robot_count() != 7) {
      throw ConfigError("robot_count", "the bridge layout needs 7 robots");
    }
    FormationResult r = optimize_formation(s, CostKind::kCov, options.jobs);
    r.id = "x_bridge";
    const std::string path = out_path(options, "formation_bridge.json");
    write_formation_file(path, r);
    precise(out);
    print_formation(out, r);
    out << "GPS-enabled robots:";
    for (RobotId id : r.gps_robots) out << " " << id;
    out << "\nwrote " << path << "\n";
    if (!r.converged) {
      err << "optimizer did not converge: " << r.diagnostic << "\n";
      return static_cast<int>(kExitIncomplete);
    }
    return static_cast<int>(kExitOk);
  });
}

}  // namespace formation::cli

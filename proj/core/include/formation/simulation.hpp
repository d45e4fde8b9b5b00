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

#ifndef FORMATION_SIMULATION_HPP_
#define FORMATION_SIMULATION_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "formation/coverage.hpp"
#include "formation/ekf_slam.hpp"
#include "formation/se2.hpp"
#include "formation/team.hpp"

namespace formation {

struct SimConfig {
  Area area;
  double dt_truth = 0.01;     // velocity inputs at 100 Hz
  double range_rate = 110.0;  // Hz
  double gps_rate = 50.0;     // Hz
  double gps_sigma = 0.1;     // m per component
  double range_sigma = 0.1;   // m
  ProcessNoise vel_noise;
  std::vector<Vec2> landmark_positions{Vec2(2.5, 8.0), Vec2(7.5, 16.0)};
  double landmark_detection_radius = 2.0;
  double waypoint_tolerance = 0.1;
  double formation_gate = 0.5;  // "in formation" threshold, m
  ControlGains gains;
  double init_sigma_heading = 0.05;
  double init_sigma_position = 0.1;
  TrilaterationOptions trilateration{30, 0.5, 0.25, 2.0, 1e6, 10.0, 20};
  double divergence_threshold = 100.0;  // m or rad
  double max_sim_time = 900.0;
  bool noise_enabled = true;
  bool gps_enabled = true;
  std::uint64_t seed = 1;

  void validate() const;
};

struct RangeReading {
  TagId a = 0;
  TagId b = 0;
  double value = 0.0;
};

struct MeasurementEvent {
  enum class Kind { kRange, kGps };
  Kind kind = Kind::kRange;
  int step = 0;  // truth step index the measurement belongs to
  std::vector<RangeReading> ranges;
  Vec2 gps = Vec2::Zero();
};

/// Ground truth of one run. poses[i] holds every robot's global pose at
/// t = i * dt; odometry[i] is the noisy body velocity applied over
/// [t_i, t_i + dt].
struct TruthLog {
  std::vector<std::vector<Pose2>> poses;
  std::vector<std::vector<Twist2>> odometry;
  std::vector<MeasurementEvent> events;
  std::vector<Vec2> waypoints;  // leader waypoints
  double sweep_width = 0.0;
  bool completed = false;
  double coverage_time = 0.0;
  double dt = 0.01;
};

/// Fleet team for simulation: the given robots plus one ranging tag per
/// configured landmark (global positions).
TeamConfig simulation_team(const TeamConfig& team, const SimConfig& config);

// Leader waypoints: square-wave corners shifted so the camera footprint
// centre, not the leader, follows the sweep legs.
std::vector<Vec2> leader_waypoints(const SimConfig& config,
                                   const FormationState& x_des,
                                   const TeamConfig& team);

/// Integrates the leader-follower fleet through the square-wave sweep and
/// records noisy odometry, range events and GPS events. A corner is reached
/// once the leader is within `waypoint_tolerance` and the formation error is
/// below `formation_gate`.
TruthLog simulate_truth(const SimConfig& config, const TeamConfig& team,
                        const RangeGraph& graph, const FormationState& x_des);

// Same, with explicit waypoints (bypasses the sweep generator).
TruthLog simulate_truth(const SimConfig& config, const TeamConfig& team,
                        const RangeGraph& graph, const FormationState& x_des,
                        const std::vector<Vec2>& waypoints);

struct SimMetrics {
  bool completed = false;
  bool diverged = false;
  double coverage_time = 0.0;
  double interrobot_att_rmse = 0.0;  // rad
  double interrobot_pos_rmse = 0.0;  // m
  std::vector<double> landmark_errors;  // final error per landmark, NaN if never initialized
  double nees_containment = 0.0;  // fraction of post-init steps inside 3 sigma
  long containment_samples = 0;   // post-init (step, landmark) pairs checked
  int rejected_updates = 0;
  double min_covariance_eigenvalue = 0.0;
  double max_asymmetry = 0.0;
};

struct TrajectoryRow {
  double t = 0.0;
  std::vector<Pose2> truth;
  std::vector<Pose2> estimate;
  std::vector<Vec2> landmark_estimate;   // NaN until initialized
  std::vector<Vec2> landmark_three_sigma;
};

struct SimOutput {
  SimMetrics metrics;
  std::vector<TrajectoryRow> trajectory;  // filled when requested
};

/// Runs the EKF-SLAM estimator over a truth log.
SimOutput estimate_run(const SimConfig& config, const TeamConfig& team,
                       const RangeGraph& graph, const TruthLog& log,
                       int trajectory_stride = 0);

/// simulate_truth followed by estimate_run.
SimOutput run_coverage_sim(const SimConfig& config, const TeamConfig& team,
                           const RangeGraph& graph, const FormationState& x_des,
                           int trajectory_stride = 0);

struct TrialRecord {
  int trial = 0;
  std::uint64_t seed = 0;
  std::string formation_id;
  SimMetrics metrics;
};

struct MetricSummary {
  double median = 0.0;
  double p25 = 0.0;
  double p75 = 0.0;
  int count = 0;
};

struct MonteCarloSummary {
  std::string formation_id;
  int trials = 0;
  int incomplete = 0;
  int diverged = 0;
  // Over completed trials, diverged included.
  MetricSummary coverage_time;
  MetricSummary att_rmse;
  MetricSummary pos_rmse;
  std::vector<MetricSummary> landmark_errors;
  MetricSummary nees_containment;
  // Same statistics with diverged trials excluded.
  MetricSummary att_rmse_excl;
  MetricSummary pos_rmse_excl;
  std::vector<MetricSummary> landmark_errors_excl;
};

struct MonteCarloResult {
  std::vector<TrialRecord> trials;
  MonteCarloSummary summary;
};

/// Independent trials with per-trial seeds derived from config.seed. Trial k
/// uses the same seed for every formation, so comparisons share noise draws.
MonteCarloResult monte_carlo(const SimConfig& config, const TeamConfig& team,
                             const RangeGraph& graph, const FormationState& x_des,
                             int trials, const std::string& formation_id,
                             int jobs = 1);

MonteCarloSummary summarize(const std::vector<TrialRecord>& trials,
                            const std::string& formation_id, int landmark_count);

// Linear-interpolated percentile (q in [0, 1]) ignoring NaNs.
MetricSummary summarize_values(std::vector<double> values);

// 100 (reference - value) / reference.
double percentage_reduction(double reference, double value);

}  // namespace formation

#endif  // FORMATION_SIMULATION_HPP_

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

#include "formation/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "formation/optimizer.hpp"
#include "formation/parallel.hpp"

namespace formation {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Samples retained per landmark while waiting for a trilateration fix.
constexpr std::size_t kMaxBufferedSamples = 400;
// New samples between two trilateration attempts.
constexpr std::size_t kInitAttemptEvery = 10;

// Number of events of a `rate` Hz stream with timestamps in [0, step * dt].
long events_until(int step, double dt, double rate) {
  return static_cast<long>(std::floor(step * dt * rate + 1e-9));
}

RangeEndpoint endpoint_for(const TeamConfig& team, TagId tag) {
  const TagLocation& loc = team.tag(tag);
  if (loc.is_landmark()) return RangeEndpoint::Landmark(loc.local_index);
  return RangeEndpoint::Robot(
      loc.robot - 1,
      team.robot(loc.robot).tag_offsets[static_cast<std::size_t>(loc.local_index)]);
}

Vec2 global_tag_position(const TeamConfig& team, const std::vector<Pose2>& poses,
                         TagId tag) {
  const TagLocation& loc = team.tag(tag);
  if (loc.is_landmark()) {
    return team.landmarks()[static_cast<std::size_t>(loc.local_index)];
  }
  return poses[static_cast<std::size_t>(loc.robot - 1)] *
         team.robot(loc.robot).tag_offsets[static_cast<std::size_t>(loc.local_index)];
}

double percentile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return kNaN;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

void SimConfig::validate() const {
  if (!(area.width > 0.0 && area.height > 0.0)) {
    throw std::invalid_argument("sim.area must be positive");
  }
  if (!(dt_truth > 0.0 && range_rate > 0.0 && gps_rate > 0.0)) {
    throw std::invalid_argument("sim rates must be positive");
  }
  if (!(waypoint_tolerance > 0.0)) {
    throw std::invalid_argument("sim.waypoint_tolerance must be positive");
  }
  if (!(landmark_detection_radius > 0.0)) {
    throw std::invalid_argument("sim.landmark_detection_radius must be positive");
  }
  if (!(gps_sigma > 0.0 && range_sigma > 0.0)) {
    throw std::invalid_argument("sim measurement sigmas must be positive");
  }
  if (!(formation_gate > 0.0 && max_sim_time > 0.0)) {
    throw std::invalid_argument("sim.formation_gate and max_sim_time must be positive");
  }
}

TeamConfig simulation_team(const TeamConfig& team, const SimConfig& config) {
  return TeamConfig(team.robots(), config.landmark_positions);
}

std::vector<Vec2> leader_waypoints(const SimConfig& config,
                                   const FormationState& x_des,
                                   const TeamConfig& team) {
  const auto [lo, hi] = camera_footprint(x_des, team);
  const double width = std::min(hi - lo, config.area.width);
  const Vec2 centre_offset(0.5 * (lo + hi), 0.0);
  std::vector<Vec2> corners = generate_waypoints(config.area, width);
  for (Vec2& c : corners) c -= centre_offset;
  return corners;
}

TruthLog simulate_truth(const SimConfig& config, const TeamConfig& team,
                        const RangeGraph& graph, const FormationState& x_des) {
  return simulate_truth(config, team, graph, x_des,
                        leader_waypoints(config, x_des, team));
}

TruthLog simulate_truth(const SimConfig& config, const TeamConfig& team,
                        const RangeGraph& graph, const FormationState& x_des,
                        const std::vector<Vec2>& waypoints) {
  config.validate();
  if (waypoints.empty()) throw std::invalid_argument("no waypoints");
  if (team.robot_count() != x_des.robot_count()) {
    throw std::invalid_argument("formation and team sizes differ");
  }
  const TeamConfig sim_team = simulation_team(team, config);
  const int n = team.robot_count();
  const double dt = config.dt_truth;

  std::mt19937_64 rng(derive_seed(config.seed, 0));
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double noise_scale = config.noise_enabled ? 1.0 : 0.0;
  const double vel_scale = noise_scale / std::sqrt(dt);

  TruthLog log;
  log.dt = dt;
  log.waypoints = waypoints;
  const auto [lo, hi] = camera_footprint(x_des, team);
  log.sweep_width = hi - lo;

  std::vector<Pose2> poses;
  const Pose2 leader = Pose2::FromAngle(0.0, waypoints.front());
  poses.push_back(leader);
  for (const Pose2& rel : x_des.poses()) poses.push_back(compose(leader, rel));
  log.poses.push_back(poses);

  std::size_t wp = 0;
  const int max_steps = static_cast<int>(std::ceil(config.max_sim_time / dt));
  for (int i = 0;; ++i) {
    const double t = i * dt;
    if ((poses.front().r() - waypoints[wp]).norm() < config.waypoint_tolerance &&
        formation_error(poses, x_des) < config.formation_gate) {
      ++wp;
      if (wp == waypoints.size()) {
        log.completed = true;
        log.coverage_time = t;
        break;
      }
    }
    if (i >= max_steps) break;

    const std::vector<Twist2> u = control_step(waypoints[wp], poses, x_des, config.gains);
    std::vector<Twist2> odo;
    odo.reserve(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
      const double w = u[k].phi + vel_scale * config.vel_noise.sigma_omega * gauss(rng);
      const double vx = u[k].rho.x() + vel_scale * config.vel_noise.sigma_v * gauss(rng);
      const double vy = u[k].rho.y() + vel_scale * config.vel_noise.sigma_v * gauss(rng);
      odo.emplace_back(w, vx, vy);
      poses[k] = compose(poses[k], exp(Twist2(dt * u[k].phi, dt * u[k].rho)));
    }
    log.odometry.push_back(std::move(odo));
    log.poses.push_back(poses);

    const int step = i + 1;
    const long ranges_due = events_until(step, dt, config.range_rate) -
                            events_until(i, dt, config.range_rate);
    for (long r = 0; r < ranges_due; ++r) {
      MeasurementEvent ev;
      ev.kind = MeasurementEvent::Kind::kRange;
      ev.step = step;
      for (const auto& [e, sigma] : graph.entries()) {
        const double truth = (global_tag_position(sim_team, poses, e.i) -
                              global_tag_position(sim_team, poses, e.j))
                                 .norm();
        ev.ranges.push_back({e.i, e.j, truth + noise_scale * sigma * gauss(rng)});
      }
      for (int l = 0; l < static_cast<int>(config.landmark_positions.size()); ++l) {
        const Vec2& lm = config.landmark_positions[static_cast<std::size_t>(l)];
        const TagId lm_tag = sim_team.landmark_tag(l);
        for (RobotId id = 1; id <= n; ++id) {
          if ((poses[static_cast<std::size_t>(id - 1)].r() - lm).norm() >
              config.landmark_detection_radius) {
            continue;
          }
          for (TagId tag : sim_team.tags_of(id)) {
            const double truth = (global_tag_position(sim_team, poses, tag) - lm).norm();
            ev.ranges.push_back(
                {tag, lm_tag, truth + noise_scale * config.range_sigma * gauss(rng)});
          }
        }
      }
      log.events.push_back(std::move(ev));
    }
    if (config.gps_enabled) {
      const long gps_due = events_until(step, dt, config.gps_rate) -
                           events_until(i, dt, config.gps_rate);
      for (long g = 0; g < gps_due; ++g) {
        MeasurementEvent ev;
        ev.kind = MeasurementEvent::Kind::kGps;
        ev.step = step;
        ev.gps = poses.front().r() +
                 noise_scale * config.gps_sigma * Vec2(gauss(rng), gauss(rng));
        log.events.push_back(std::move(ev));
      }
    }
  }
  return log;
}

SimOutput estimate_run(const SimConfig& config, const TeamConfig& team,
                       const RangeGraph& graph, const TruthLog& log,
                       int trajectory_stride) {
  const TeamConfig sim_team = simulation_team(team, config);
  const int n = team.robot_count();
  const int landmark_count = static_cast<int>(config.landmark_positions.size());
  const double noise_scale = config.noise_enabled ? 1.0 : 0.0;

  std::mt19937_64 rng(derive_seed(config.seed, 1));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Pose2> initial;
  for (const Pose2& truth : log.poses.front()) {
    const Twist2 err(noise_scale * config.init_sigma_heading * gauss(rng),
                     noise_scale * config.init_sigma_position * gauss(rng),
                     noise_scale * config.init_sigma_position * gauss(rng));
    initial.push_back(compose(truth, exp(err)));
  }
  EkfState state = make_ekf_state(std::move(initial), landmark_count,
                                  config.init_sigma_heading,
                                  config.init_sigma_position);

  std::vector<std::vector<RangeSample>> buffers(static_cast<std::size_t>(landmark_count));
  std::vector<std::size_t> fresh(static_cast<std::size_t>(landmark_count), 0);

  SimOutput out;
  SimMetrics& m = out.metrics;
  m.completed = log.completed;
  m.coverage_time = log.coverage_time;
  double att_sq = 0.0, pos_sq = 0.0;
  long rel_samples = 0;
  long contained = 0, post_init = 0;
  m.min_covariance_eigenvalue = std::numeric_limits<double>::infinity();

  const auto check_covariance = [&] {
    const Eigen::MatrixXd& P = state.covariance;
    m.max_asymmetry = std::max(m.max_asymmetry, (P - P.transpose()).cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(P, Eigen::EigenvaluesOnly);
    m.min_covariance_eigenvalue =
        std::min(m.min_covariance_eigenvalue, eig.eigenvalues().minCoeff());
  };

  std::size_t next_event = 0;
  const int steps = static_cast<int>(log.odometry.size());
  for (int i = 0; i < steps; ++i) {
    apply_predict(state, log.odometry[static_cast<std::size_t>(i)], config.vel_noise,
                  log.dt);
    const int step = i + 1;
    while (next_event < log.events.size() && log.events[next_event].step == step) {
      const MeasurementEvent& ev = log.events[next_event++];
      if (ev.kind == MeasurementEvent::Kind::kGps) {
        if (!apply_gps_update(state, ev.gps, config.gps_sigma).accepted) {
          ++m.rejected_updates;
        }
        continue;
      }
      for (const RangeReading& r : ev.ranges) {
        const RangeEndpoint a = endpoint_for(sim_team, r.a);
        const RangeEndpoint b = endpoint_for(sim_team, r.b);
        const double sigma = graph.contains(Edge(r.a, r.b))
                                 ? graph.sigma(Edge(r.a, r.b))
                                 : config.range_sigma;
        const RangeEndpoint* lm = a.landmark_index >= 0   ? &a
                                  : b.landmark_index >= 0 ? &b
                                                          : nullptr;
        if (lm != nullptr && !state.has_landmark(lm->landmark_index)) {
          const RangeEndpoint& robot_end = lm == &a ? b : a;
          auto& buf = buffers[static_cast<std::size_t>(lm->landmark_index)];
          buf.push_back({endpoint_position(state, robot_end), r.value,
                         endpoint_covariance(state, robot_end)});
          if (buf.size() > kMaxBufferedSamples) buf.erase(buf.begin());
          ++fresh[static_cast<std::size_t>(lm->landmark_index)];
          continue;
        }
        if (!apply_range_update(state, a, b, r.value, sigma).accepted) {
          ++m.rejected_updates;
        }
      }
      for (int l = 0; l < landmark_count; ++l) {
        const auto idx = static_cast<std::size_t>(l);
        if (state.has_landmark(l) || fresh[idx] < kInitAttemptEvery) continue;
        if (buffers[idx].size() < config.trilateration.min_samples) continue;
        fresh[idx] = 0;
        bool ok = false;
        state = landmark_init(state, l, buffers[idx], config.range_sigma,
                              config.trilateration, &ok);
        if (ok) buffers[idx].clear();
      }
    }

    const std::vector<Pose2>& truth = log.poses[static_cast<std::size_t>(step)];
    const Pose2& est_ref = state.robots.front();
    const Pose2& true_ref = truth.front();
    for (int k = 1; k < n; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      const double att_err =
          wrap_angle((state.robots[kk].angle() - est_ref.angle()) -
                     (truth[kk].angle() - true_ref.angle()));
      const Vec2 rel_est = est_ref.C().transpose() * (state.robots[kk].r() - est_ref.r());
      const Vec2 rel_true = true_ref.C().transpose() * (truth[kk].r() - true_ref.r());
      att_sq += att_err * att_err;
      pos_sq += (rel_est - rel_true).squaredNorm();
      ++rel_samples;
    }
    for (int l = 0; l < landmark_count; ++l) {
      if (!state.has_landmark(l)) continue;
      const Vec2 err = state.landmark(l) - config.landmark_positions[static_cast<std::size_t>(l)];
      const Eigen::Matrix2d P = state.landmark_covariance(l);
      ++post_init;
      if (std::abs(err.x()) <= 3.0 * std::sqrt(std::max(P(0, 0), 0.0)) &&
          std::abs(err.y()) <= 3.0 * std::sqrt(std::max(P(1, 1), 0.0))) {
        ++contained;
      }
    }
    if (step % 100 == 0) check_covariance();

    if (trajectory_stride > 0 && step % trajectory_stride == 0) {
      TrajectoryRow row;
      row.t = step * log.dt;
      row.truth = truth;
      row.estimate = state.robots;
      for (int l = 0; l < landmark_count; ++l) {
        if (state.has_landmark(l)) {
          const Eigen::Matrix2d P = state.landmark_covariance(l);
          row.landmark_estimate.push_back(state.landmark(l));
          row.landmark_three_sigma.emplace_back(3.0 * std::sqrt(std::max(P(0, 0), 0.0)),
                                                3.0 * std::sqrt(std::max(P(1, 1), 0.0)));
        } else {
          row.landmark_estimate.emplace_back(kNaN, kNaN);
          row.landmark_three_sigma.emplace_back(kNaN, kNaN);
        }
      }
      out.trajectory.push_back(std::move(row));
    }
  }
  check_covariance();

  m.interrobot_att_rmse = rel_samples > 0 ? std::sqrt(att_sq / rel_samples) : 0.0;
  m.interrobot_pos_rmse = rel_samples > 0 ? std::sqrt(pos_sq / rel_samples) : 0.0;
  for (int l = 0; l < landmark_count; ++l) {
    m.landmark_errors.push_back(
        state.has_landmark(l)
            ? (state.landmark(l) - config.landmark_positions[static_cast<std::size_t>(l)]).norm()
            : kNaN);
  }
  m.containment_samples = post_init;
  m.nees_containment =
      post_init > 0 ? static_cast<double>(contained) / static_cast<double>(post_init) : kNaN;

  const auto too_large = [&](double v) {
    return !std::isnan(v) && !(v <= config.divergence_threshold);
  };
  m.diverged = !std::isfinite(m.interrobot_att_rmse) || !std::isfinite(m.interrobot_pos_rmse) ||
               too_large(m.interrobot_att_rmse) || too_large(m.interrobot_pos_rmse);
  for (double e : m.landmark_errors) m.diverged = m.diverged || too_large(e);
  return out;
}

SimOutput run_coverage_sim(const SimConfig& config, const TeamConfig& team,
                           const RangeGraph& graph, const FormationState& x_des,
                           int trajectory_stride) {
  const TruthLog log = simulate_truth(config, team, graph, x_des);
  return estimate_run(config, team, graph, log, trajectory_stride);
}

MetricSummary summarize_values(std::vector<double> values) {
  values.erase(std::remove_if(values.begin(), values.end(),
                              [](double v) { return std::isnan(v); }),
               values.end());
  std::sort(values.begin(), values.end());
  MetricSummary s;
  s.count = static_cast<int>(values.size());
  s.median = percentile(values, 0.5);
  s.p25 = percentile(values, 0.25);
  s.p75 = percentile(values, 0.75);
  return s;
}

double percentage_reduction(double reference, double value) {
  return 100.0 * (reference - value) / reference;
}

MonteCarloSummary summarize(const std::vector<TrialRecord>& trials,
                            const std::string& formation_id, int landmark_count) {
  MonteCarloSummary s;
  s.formation_id = formation_id;
  s.trials = static_cast<int>(trials.size());
  std::vector<double> cov, att, pos, nees, att_x, pos_x;
  std::vector<std::vector<double>> lm(static_cast<std::size_t>(landmark_count));
  std::vector<std::vector<double>> lm_x(static_cast<std::size_t>(landmark_count));
  for (const TrialRecord& t : trials) {
    const SimMetrics& m = t.metrics;
    if (!m.completed) {
      ++s.incomplete;
      continue;
    }
    if (m.diverged) ++s.diverged;
    cov.push_back(m.coverage_time);
    att.push_back(m.interrobot_att_rmse);
    pos.push_back(m.interrobot_pos_rmse);
    nees.push_back(m.nees_containment);
    for (int l = 0; l < landmark_count; ++l) {
      const auto idx = static_cast<std::size_t>(l);
      const double e = idx < m.landmark_errors.size() ? m.landmark_errors[idx] : kNaN;
      lm[idx].push_back(e);
      if (!m.diverged) lm_x[idx].push_back(e);
    }
    if (!m.diverged) {
      att_x.push_back(m.interrobot_att_rmse);
      pos_x.push_back(m.interrobot_pos_rmse);
    }
  }
  s.coverage_time = summarize_values(cov);
  s.att_rmse = summarize_values(att);
  s.pos_rmse = summarize_values(pos);
  s.nees_containment = summarize_values(nees);
  s.att_rmse_excl = summarize_values(att_x);
  s.pos_rmse_excl = summarize_values(pos_x);
  for (int l = 0; l < landmark_count; ++l) {
    s.landmark_errors.push_back(summarize_values(lm[static_cast<std::size_t>(l)]));
    s.landmark_errors_excl.push_back(summarize_values(lm_x[static_cast<std::size_t>(l)]));
  }
  return s;
}

MonteCarloResult monte_carlo(const SimConfig& config, const TeamConfig& team,
                             const RangeGraph& graph, const FormationState& x_des,
                             int trials, const std::string& formation_id, int jobs) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  MonteCarloResult result;
  result.trials.resize(static_cast<std::size_t>(trials));
  parallel_for(trials, jobs, [&](int k) {
    SimConfig trial_cfg = config;
    trial_cfg.seed = derive_seed(config.seed, static_cast<std::uint64_t>(k) + 1000);
    TrialRecord& rec = result.trials[static_cast<std::size_t>(k)];
    rec.trial = k;
    rec.seed = trial_cfg.seed;
    rec.formation_id = formation_id;
    rec.metrics = run_coverage_sim(trial_cfg, team, graph, x_des).metrics;
  });
  result.summary = summarize(result.trials, formation_id,
                             static_cast<int>(config.landmark_positions.size()));
  return result;
}

}  // namespace formation

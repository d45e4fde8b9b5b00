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

#include "formation/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace formation {
namespace {

Vec2 saturate(const Vec2& v, double cap) {
  const double n = v.norm();
  return n > cap ? Vec2(v * (cap / n)) : v;
}

}  // namespace

std::vector<Vec2> generate_waypoints(const Area& area, double sweep_width) {
  if (!(sweep_width > 0.0)) {
    throw std::invalid_argument("sweep width must be positive");
  }
  if (sweep_width > area.width) {
    throw std::invalid_argument("sweep width exceeds the area width");
  }
  const int legs = static_cast<int>(std::ceil(area.width / sweep_width - 1e-9));
  std::vector<Vec2> corners;
  for (int k = 0; k < legs; ++k) {
    const double x = std::min((k + 0.5) * sweep_width, area.width - 0.5 * sweep_width);
    const bool upward = k % 2 == 0;
    corners.emplace_back(x, upward ? 0.0 : area.height);
    corners.emplace_back(x, upward ? area.height : 0.0);
  }
  return corners;
}

std::pair<double, double> camera_footprint(const FormationState& x,
                                           const TeamConfig& team) {
  std::vector<std::pair<double, double>> spans;
  for (const RobotSpec& r : team.robots()) {
    const double cx = x.pose(r.id).r().x();
    spans.emplace_back(cx - r.camera_radius, cx + r.camera_radius);
  }
  std::sort(spans.begin(), spans.end());
  std::pair<double, double> best = spans.front();
  std::pair<double, double> cur = spans.front();
  for (std::size_t k = 1; k < spans.size(); ++k) {
    if (spans[k].first <= cur.second) {
      cur.second = std::max(cur.second, spans[k].second);
    } else {
      cur = spans[k];
    }
    if (cur.second - cur.first > best.second - best.first) best = cur;
  }
  return best;
}

double formation_sweep_width(const FormationState& x, const TeamConfig& team) {
  const auto [lo, hi] = camera_footprint(x, team);
  return hi - lo;
}

std::vector<Vec2> formation_targets(const std::vector<Pose2>& truth,
                                    const FormationState& x_des) {
  std::vector<Vec2> targets;
  const Pose2& leader = truth.front();
  targets.push_back(leader.r());
  for (const Pose2& rel : x_des.poses()) {
    targets.push_back(leader.r() + leader.C() * rel.r());
  }
  return targets;
}

double formation_error(const std::vector<Pose2>& truth,
                       const FormationState& x_des) {
  const std::vector<Vec2> targets = formation_targets(truth, x_des);
  double sq = 0.0;
  for (std::size_t k = 1; k < truth.size(); ++k) {
    sq += (targets[k] - truth[k].r()).squaredNorm();
  }
  return std::sqrt(sq);
}

std::vector<Twist2> control_step(const Vec2& leader_goal,
                                 const std::vector<Pose2>& truth,
                                 const FormationState& x_des,
                                 const ControlGains& gains,
                                 double formation_heading) {
  if (!(gains.k_waypoint > 0.0 && gains.k_formation > 0.0 &&
        gains.k_heading > 0.0 && gains.speed_cap > 0.0 &&
        gains.follower_speed_cap > 0.0)) {
    throw std::invalid_argument("control gains must be positive");
  }
  if (static_cast<int>(truth.size()) != x_des.robot_count()) {
    throw std::invalid_argument("control_step: pose count mismatch");
  }
  std::vector<Twist2> out;
  const Pose2& leader = truth.front();
  const Vec2 leader_vel =
      saturate(gains.k_waypoint * (leader_goal - leader.r()), gains.speed_cap);
  out.emplace_back(gains.k_heading * wrap_angle(formation_heading - leader.angle()),
                   leader.C().transpose() * leader_vel);

  const std::vector<Vec2> targets = formation_targets(truth, x_des);
  for (std::size_t k = 1; k < truth.size(); ++k) {
    const Pose2& follower = truth[k];
    const Vec2 vel = saturate(
        leader_vel + gains.k_formation * (targets[k] - follower.r()),
        gains.follower_speed_cap);
    const double heading_ref = leader.angle() + x_des.poses()[k - 1].angle();
    out.emplace_back(gains.k_heading * wrap_angle(heading_ref - follower.angle()),
                     follower.C().transpose() * vel);
  }
  return out;
}

}  // namespace formation

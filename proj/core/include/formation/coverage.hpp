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

#ifndef FORMATION_COVERAGE_HPP_
#define FORMATION_COVERAGE_HPP_

#include <utility>
#include <vector>

#include "formation/se2.hpp"
#include "formation/team.hpp"

namespace formation {

struct Area {
  double width = 10.0;   // x extent, meters
  double height = 24.0;  // y extent, meters
};

/// Square-wave corner sequence over [0, width] x [0, height]. Legs are
/// vertical, centred at (k + 1/2) * sweep_width and clamped so the last leg
/// stays inside the area; each leg contributes its two end corners.
std::vector<Vec2> generate_waypoints(const Area& area, double sweep_width);

/// x-projection of the union of camera disks, in Robot 1's frame. Returns
/// the interval [lo, hi] of the connected component with the largest
/// length; disjoint components would leave uncovered stripes between legs.
std::pair<double, double> camera_footprint(const FormationState& x,
                                           const TeamConfig& team);

// hi - lo of camera_footprint.
double formation_sweep_width(const FormationState& x, const TeamConfig& team);

struct ControlGains {
  double k_waypoint = 0.8;    // 1/s
  double k_formation = 1.2;   // 1/s
  double k_heading = 2.0;     // 1/s
  double speed_cap = 1.0;     // leader, m/s
  double follower_speed_cap = 2.0;
};

/// Body-frame velocity commands [omega, v_x, v_y] for every robot (index 0
/// is the leader, Robot 1). The leader is driven toward `leader_goal` and
/// held at `formation_heading`; followers track the leader's commanded
/// velocity plus a proportional term toward their slot in `x_des`.
std::vector<Twist2> control_step(const Vec2& leader_goal,
                                 const std::vector<Pose2>& truth,
                                 const FormationState& x_des,
                                 const ControlGains& gains,
                                 double formation_heading = 0.0);

// Global slot targets of the followers (index 0 holds the leader position).
std::vector<Vec2> formation_targets(const std::vector<Pose2>& truth,
                                    const FormationState& x_des);

// Norm of the stacked follower position errors.
double formation_error(const std::vector<Pose2>& truth,
                       const FormationState& x_des);

}  // namespace formation

#endif  // FORMATION_COVERAGE_HPP_

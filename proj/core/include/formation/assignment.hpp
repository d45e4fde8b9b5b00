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

#ifndef FORMATION_ASSIGNMENT_HPP_
#define FORMATION_ASSIGNMENT_HPP_

#include <vector>

#include <Eigen/Core>

#include "formation/se2.hpp"
#include "formation/team.hpp"

namespace formation {

using CostMatrix = Eigen::MatrixXd;

/// Row i is assigned to column assignment[i].
using Assignment = std::vector<int>;

// Sum of c(i, assignment[i]) accumulated in row order.
double assignment_cost(const CostMatrix& c, const Assignment& assignment);

/// Minimum-cost perfect matching of a square matrix (Kuhn-Munkres with
/// potentials). Among optimal assignments the lexicographically smallest one
/// is returned. Throws std::invalid_argument for non-square or non-finite
/// input.
Assignment hungarian(const CostMatrix& c);

// Approximate slot targets used to rank robots: slot i (i = 2..N) sits at
// sum_{k<i} d_avg n^(k) with d_avg = (2/N) sum r_n.
std::vector<Vec2> approximate_slot_targets(const std::vector<double>& radii,
                                           const std::vector<Vec2>& directions);

// Squared travel distance from each slot target (row) to each robot 2..N
// (column).
CostMatrix travel_cost_matrix(const FormationState& x,
                              const std::vector<Vec2>& targets);

/// Orders robot ids so that the fleet travels the least total squared
/// distance into the requested formation. Robot 1 always keeps slot 1.
SortedIds sort_robot_ids(const FormationState& x, const TeamConfig& team,
                         const std::vector<Vec2>& directions);

}  // namespace formation

#endif  // FORMATION_ASSIGNMENT_HPP_

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

#ifndef FORMATION_COSTS_HPP_
#define FORMATION_COSTS_HPP_

#include <stdexcept>

#include "formation/ranging.hpp"
#include "formation/se2.hpp"
#include "formation/team.hpp"

namespace formation {

// Value reported for an unobservable geometry or a breached collision
// barrier.
inline constexpr double kSaturatedCost = 1e12;

class DegeneratePairError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CostBreakdown {
  double adj = 0.0;
  double overlap = 0.0;
  double est = 0.0;
  double col = 0.0;
  double total = 0.0;
};

/// -ln det(H^T R^-1 H). Returns kSaturatedCost when the information matrix
/// is not positive definite.
double j_est(const FormationState& x, const TeamConfig& team,
             const RangeGraph& graph);

// Same, on an already assembled information matrix.
double neg_log_det(const FisherMatrix& F);

/// Barrier (min{0, (|r|^2 - A^2)/(|r|^2 - d^2)})^2 on one separation.
/// Returns kSaturatedCost when |r| <= d.
double j_col_pair(double separation, double activation_radius,
                  double collision_radius);
double j_col_pair(const FormationState& x, RobotId m, RobotId n,
                  double activation_radius, double collision_radius);

// Sum of the barrier over all ordered pairs m != n.
double j_col(const FormationState& x, const FormationSpec& spec);

/// Target displacement of sorted slot m relative to sorted slot n (1-based,
/// n < m), resolved in Robot 1's frame.
Vec2 desired_offset(const FormationSpec& spec, const SortedIds& sorted, int n,
                    int m);

double j_adj(const FormationState& x, const FormationSpec& spec,
             const SortedIds& sorted);

// Target separation (1 - lambda)(2 sum_{k=n}^{m} r_k - r_n - r_m) of the
// overlap term for sorted slots n < m.
double overlap_separation(const FormationSpec& spec, const SortedIds& sorted,
                          int n, int m);

double j_overlap(const FormationState& x, const FormationSpec& spec,
                 const SortedIds& sorted);

// est + col, weights of one, adjacency and overlap reported as zero.
CostBreakdown j_opt(const FormationState& x, const TeamConfig& team,
                    const RangeGraph& graph, const FormationSpec& spec);

// Weighted adj + overlap + est + col.
CostBreakdown j_cov(const FormationState& x, const TeamConfig& team,
                    const RangeGraph& graph, const FormationSpec& spec,
                    const SortedIds& sorted);

}  // namespace formation

#endif  // FORMATION_COSTS_HPP_

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

#include "formation/costs.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace formation {
namespace {

// Eigenvalues below this fraction of the largest are treated as zero.
constexpr double kRelativeEigenFloor = 1e-14;

void check_slots(const SortedIds& sorted, int n, int m) {
  if (!(1 <= n && n < m && m <= sorted.size())) {
    throw std::invalid_argument("slot indices must satisfy 1 <= n < m <= N; got (" +
                                std::to_string(n) + ", " + std::to_string(m) + ")");
  }
}

Vec2 slot_displacement(const FormationState& x, const SortedIds& sorted, int n,
                       int m) {
  return relative_position(x, sorted.order[static_cast<std::size_t>(m - 1)],
                           sorted.order[static_cast<std::size_t>(n - 1)]);
}

}  // namespace

double neg_log_det(const FisherMatrix& F) {
  if (F.rows() == 0) return kSaturatedCost;
  if (!F.allFinite()) return kSaturatedCost;
  Eigen::SelfAdjointEigenSolver<FisherMatrix> eig(F, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) return kSaturatedCost;
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const double largest = lambda.maxCoeff();
  if (!(largest > 0.0) || lambda.minCoeff() <= kRelativeEigenFloor * largest) {
    return kSaturatedCost;
  }
  return -lambda.array().log().sum();
}

double j_est(const FormationState& x, const TeamConfig& team,
             const RangeGraph& graph) {
  if (graph.empty()) return kSaturatedCost;
  try {
    return neg_log_det(fisher(x, team, graph));
  } catch (const SingularGeometryError&) {
    return kSaturatedCost;
  }
}

double j_col_pair(double separation, double activation_radius,
                  double collision_radius) {
  if (separation <= collision_radius) return kSaturatedCost;
  const double s2 = separation * separation;
  const double ratio = (s2 - activation_radius * activation_radius) /
                       (s2 - collision_radius * collision_radius);
  const double clamped = std::min(0.0, ratio);
  return clamped * clamped;
}

double j_col_pair(const FormationState& x, RobotId m, RobotId n,
                  double activation_radius, double collision_radius) {
  return j_col_pair(relative_position(x, m, n).norm(), activation_radius,
                    collision_radius);
}

double j_col(const FormationState& x, const FormationSpec& spec) {
  const int n = x.robot_count();
  double total = 0.0;
  for (RobotId a = 1; a <= n; ++a) {
    for (RobotId b = a + 1; b <= n; ++b) {
      const double term = j_col_pair(x, a, b, spec.activation_radius,
                                     spec.collision_radius);
      if (term >= kSaturatedCost) return kSaturatedCost;
      // Ordered pairs: (a, b) and (b, a) contribute equally.
      total += 2.0 * term;
    }
  }
  return total;
}

Vec2 desired_offset(const FormationSpec& spec, const SortedIds& sorted, int n,
                    int m) {
  check_slots(sorted, n, m);
  Vec2 acc = Vec2::Zero();
  for (int k = n; k < m; ++k) {
    const double gap = sorted.radii[static_cast<std::size_t>(k)] +
                       sorted.radii[static_cast<std::size_t>(k - 1)];
    acc += gap * spec.directions[static_cast<std::size_t>(k - 1)];
  }
  return acc;
}

double j_adj(const FormationState& x, const FormationSpec& spec,
             const SortedIds& sorted) {
  const int n = sorted.size();
  double total = 0.0;
  for (int a = 1; a <= n; ++a) {
    for (int b = a + 1; b <= n; ++b) {
      total += (slot_displacement(x, sorted, a, b) - desired_offset(spec, sorted, a, b))
                   .squaredNorm();
    }
  }
  return total;
}

double overlap_separation(const FormationSpec& spec, const SortedIds& sorted,
                          int n, int m) {
  check_slots(sorted, n, m);
  double chain = 0.0;
  for (int k = n; k <= m; ++k) chain += sorted.radii[static_cast<std::size_t>(k - 1)];
  const double span = 2.0 * chain - sorted.radii[static_cast<std::size_t>(n - 1)] -
                      sorted.radii[static_cast<std::size_t>(m - 1)];
  return (1.0 - spec.lambda) * span;
}

double j_overlap(const FormationState& x, const FormationSpec& spec,
                 const SortedIds& sorted) {
  const int n = sorted.size();
  double total = 0.0;
  for (int a = 1; a <= n; ++a) {
    if (spec.overlap_exempt.count(a)) continue;
    for (int b = a + 1; b <= n; ++b) {
      if (spec.overlap_exempt.count(b)) continue;
      const Vec2 r = slot_displacement(x, sorted, a, b);
      const double dist = r.norm();
      if (dist <= kMinRange) {
        throw DegeneratePairError("overlap direction undefined for slots (" +
                                  std::to_string(a) + ", " + std::to_string(b) +
                                  ")");
      }
      const Vec2 target = overlap_separation(spec, sorted, a, b) * (r / dist);
      total += (r - target).squaredNorm();
    }
  }
  return total;
}

CostBreakdown j_opt(const FormationState& x, const TeamConfig& team,
                    const RangeGraph& graph, const FormationSpec& spec) {
  CostBreakdown out;
  out.est = j_est(x, team, graph);
  out.col = j_col(x, spec);
  out.total = out.est + out.col;
  return out;
}

CostBreakdown j_cov(const FormationState& x, const TeamConfig& team,
                    const RangeGraph& graph, const FormationSpec& spec,
                    const SortedIds& sorted) {
  const CostWeights& w = spec.weights;
  CostBreakdown out;
  out.adj = j_adj(x, spec, sorted);
  out.overlap = j_overlap(x, spec, sorted);
  out.est = j_est(x, team, graph);
  out.col = j_col(x, spec);
  out.total = w.adj * out.adj + w.overlap * out.overlap + w.est * out.est +
              w.col * out.col;
  return out;
}

}  // namespace formation

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

#include "formation/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace formation {
namespace {

// Optimal value of the matching, ignoring ties. Classic O(n^3) shortest
// augmenting path formulation with row/column potentials.
Assignment solve(const CostMatrix& c) {
  const int n = static_cast<int>(c.rows());
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = c(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  Assignment out(static_cast<std::size_t>(n));
  for (int j = 1; j <= n; ++j) out[static_cast<std::size_t>(p[j] - 1)] = j - 1;
  return out;
}

bool ties(double a, double b) {
  return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

double assignment_cost(const CostMatrix& c, const Assignment& assignment) {
  double total = 0.0;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    total += c(static_cast<Eigen::Index>(i), assignment[i]);
  }
  return total;
}

Assignment hungarian(const CostMatrix& c) {
  if (c.rows() != c.cols()) {
    throw std::invalid_argument("hungarian: cost matrix must be square, got " +
                                std::to_string(c.rows()) + "x" +
                                std::to_string(c.cols()));
  }
  if (!c.allFinite()) {
    throw std::invalid_argument("hungarian: cost matrix has non-finite entries");
  }
  const int n = static_cast<int>(c.rows());
  if (n == 0) return {};
  const double best = assignment_cost(c, solve(c));

  // Fix rows one at a time to the smallest column that still admits an
  // optimal completion.
  Assignment out(static_cast<std::size_t>(n), -1);
  std::vector<int> free_rows, free_cols;
  for (int k = 0; k < n; ++k) {
    free_rows.push_back(k);
    free_cols.push_back(k);
  }
  double fixed_cost = 0.0;
  for (int row = 0; row < n; ++row) {
    free_rows.erase(free_rows.begin());
    bool placed = false;
    for (std::size_t ci = 0; ci < free_cols.size() && !placed; ++ci) {
      const int col = free_cols[ci];
      std::vector<int> rest_cols = free_cols;
      rest_cols.erase(rest_cols.begin() + static_cast<std::ptrdiff_t>(ci));
      const int m = static_cast<int>(free_rows.size());
      double rest = 0.0;
      if (m > 0) {
        CostMatrix sub(m, m);
        for (int a = 0; a < m; ++a) {
          for (int b = 0; b < m; ++b) sub(a, b) = c(free_rows[a], rest_cols[b]);
        }
        rest = assignment_cost(sub, solve(sub));
      }
      if (ties(fixed_cost + c(row, col) + rest, best)) {
        out[static_cast<std::size_t>(row)] = col;
        fixed_cost += c(row, col);
        free_cols = std::move(rest_cols);
        placed = true;
      }
    }
    if (!placed) {
      // Rounding pushed every candidate off the tie band; fall back to the
      // plain solution.
      return solve(c);
    }
  }
  return out;
}

std::vector<Vec2> approximate_slot_targets(const std::vector<double>& radii,
                                           const std::vector<Vec2>& directions) {
  const double n = static_cast<double>(radii.size());
  double sum = 0.0;
  for (double r : radii) sum += r;
  const double d_avg = 2.0 / n * sum;
  std::vector<Vec2> targets;
  Vec2 acc = Vec2::Zero();
  for (const Vec2& dir : directions) {
    acc += d_avg * dir;
    targets.push_back(acc);
  }
  return targets;
}

CostMatrix travel_cost_matrix(const FormationState& x,
                              const std::vector<Vec2>& targets) {
  const int m = static_cast<int>(targets.size());
  CostMatrix c(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      c(i, j) = (targets[static_cast<std::size_t>(i)] - relative_position(x, j + 2, 1))
                    .squaredNorm();
    }
  }
  return c;
}

SortedIds sort_robot_ids(const FormationState& x, const TeamConfig& team,
                         const std::vector<Vec2>& directions) {
  const int n = team.robot_count();
  if (static_cast<int>(directions.size()) != n - 1 || x.robot_count() != n) {
    throw std::invalid_argument("sort_robot_ids: expected " +
                                std::to_string(n - 1) + " directions and poses");
  }
  const std::vector<Vec2> targets =
      approximate_slot_targets(team.camera_radii(), directions);
  const Assignment a = hungarian(travel_cost_matrix(x, targets));
  SortedIds out;
  out.order.push_back(1);
  for (int slot : a) out.order.push_back(slot + 2);
  for (RobotId id : out.order) out.radii.push_back(team.robot(id).camera_radius);
  return out;
}

}  // namespace formation

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

#include <limits>
#include <random>
#include <set>

#include "gtest/gtest.h"
#include "oracles.hpp"

namespace formation {
namespace {

void expect_permutation(const Assignment& a, int n) {
  ASSERT_EQ(static_cast<int>(a.size()), n);
  EXPECT_EQ(std::set<int>(a.begin(), a.end()).size(), static_cast<std::size_t>(n));
  for (int c : a) {
    EXPECT_GE(c, 0);
    EXPECT_LT(c, n);
  }
}

TEST(HungarianTest, MatchesBruteForce) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 7;
    CostMatrix c(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) c(i, j) = u(rng);
    }
    const Assignment a = hungarian(c);
    expect_permutation(a, n);
    EXPECT_EQ(assignment_cost(c, a), oracle::brute_force_assignment(c)) << "n = " << n;
  }
}

TEST(HungarianTest, IntegerMatricesWithTies) {
  std::mt19937_64 rng(22);
  std::uniform_int_distribution<int> u(0, 3);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 6;
    CostMatrix c(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) c(i, j) = u(rng);
    }
    const Assignment a = hungarian(c);
    expect_permutation(a, n);
    EXPECT_EQ(assignment_cost(c, a), oracle::brute_force_assignment(c));
  }
}

TEST(HungarianTest, TiesResolveLexicographically) {
  CostMatrix c = CostMatrix::Zero(3, 3);
  EXPECT_EQ(hungarian(c), (Assignment{0, 1, 2}));
  c << 1, 1, 0,
       1, 1, 0,
       0, 1, 1;
  // Both {1,2,0} and {2,1,0} cost 1; the lexicographically smaller wins.
  const Assignment a = hungarian(c);
  EXPECT_EQ(assignment_cost(c, a), 1.0);
  EXPECT_EQ(a, (Assignment{1, 2, 0}));
}

TEST(HungarianTest, RejectsBadInput) {
  EXPECT_THROW(hungarian(CostMatrix::Zero(2, 3)), std::invalid_argument);
  CostMatrix c = CostMatrix::Zero(2, 2);
  c(0, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(hungarian(c), std::invalid_argument);
  EXPECT_TRUE(hungarian(CostMatrix(0, 0)).empty());
}

TEST(SortIdsTest, SlotTargetsFollowAverageSpacing) {
  const std::vector<double> radii{0.5, 0.5, 0.5};
  const std::vector<Vec2> dirs{Vec2(1.0, 0.0), Vec2(0.0, 1.0)};
  const std::vector<Vec2> t = approximate_slot_targets(radii, dirs);
  ASSERT_EQ(t.size(), 2u);
  // d_avg = (2 / N) * sum(r) = 1.0
  EXPECT_NEAR((t[0] - Vec2(1.0, 0.0)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((t[1] - Vec2(1.0, 1.0)).norm(), 0.0, 1e-15);
}

TEST(SortIdsTest, RobotsAlreadyInSlotsKeepTheirOrder) {
  const TeamConfig team = TeamConfig::Uniform(4);
  const FormationState x({Pose2::FromAngle(0.0, Vec2(1.0, 0.0)),
                          Pose2::FromAngle(0.0, Vec2(2.0, 0.0)),
                          Pose2::FromAngle(0.0, Vec2(3.0, 0.0))});
  const SortedIds s = sort_robot_ids(x, team, FormationSpec::Line(4).directions);
  EXPECT_EQ(s.order, (std::vector<RobotId>{1, 2, 3, 4}));
}

TEST(SortIdsTest, ReversedRobotsAreReordered) {
  const TeamConfig team = TeamConfig::Uniform(4);
  const FormationState x({Pose2::FromAngle(0.0, Vec2(3.1, 0.2)),
                          Pose2::FromAngle(0.0, Vec2(0.9, -0.1)),
                          Pose2::FromAngle(0.0, Vec2(2.0, 0.1))});
  const SortedIds s = sort_robot_ids(x, team, FormationSpec::Line(4).directions);
  EXPECT_EQ(s.order, (std::vector<RobotId>{1, 3, 4, 2}));
  EXPECT_EQ(s.radii.size(), 4u);
}

TEST(SortIdsTest, TravelCostIsSquaredDistance) {
  const FormationState x({Pose2::FromAngle(0.0, Vec2(1.0, 1.0))});
  const CostMatrix c = travel_cost_matrix(x, {Vec2(0.0, 0.0)});
  EXPECT_DOUBLE_EQ(c(0, 0), 2.0);
}

}  // namespace
}  // namespace formation

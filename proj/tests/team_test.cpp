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

#include "formation/team.hpp"

#include "gtest/gtest.h"

namespace formation {
namespace {

// Cross-robot tag pairs counted directly from the tag table.
std::size_t enumerate_cross_pairs(const TeamConfig& team, RobotId skip_a = 0,
                                  RobotId skip_b = 0) {
  std::size_t count = 0;
  for (TagId i = 1; i <= team.robot_tag_count(); ++i) {
    for (TagId j = i + 1; j <= team.robot_tag_count(); ++j) {
      const RobotId a = team.tag(i).robot, b = team.tag(j).robot;
      if (a == b) continue;
      if ((a == skip_a && b == skip_b) || (a == skip_b && b == skip_a)) continue;
      ++count;
    }
  }
  return count;
}

TEST(TeamTest, TagIdsAreRobotMajor) {
  const TeamConfig team = TeamConfig::Uniform(3);
  EXPECT_EQ(team.tag_count(), 6);
  EXPECT_EQ(team.tag(1).robot, 1);
  EXPECT_EQ(team.tag(2).robot, 1);
  EXPECT_EQ(team.tag(3).robot, 2);
  EXPECT_EQ(team.tag(6).local_index, 1);
  EXPECT_EQ(team.tags_of(3), (std::vector<TagId>{5, 6}));
}

TEST(TeamTest, LandmarkTagsFollowRobotTags) {
  const TeamConfig team(TeamConfig::Uniform(2).robots(), {Vec2(1.0, 2.0)});
  EXPECT_EQ(team.landmark_tag(0), 5);
  EXPECT_TRUE(team.tag(5).is_landmark());
}

TEST(TeamTest, RejectsBadRobotIds) {
  std::vector<RobotSpec> robots = TeamConfig::Uniform(2).robots();
  robots[1].id = 3;
  EXPECT_THROW(TeamConfig{robots}, std::invalid_argument);
}

TEST(RangeGraphTest, FullGraphCounts) {
  EXPECT_EQ(default_full_graph(TeamConfig::Uniform(2)).size(), 4u);
  EXPECT_EQ(default_full_graph(TeamConfig::Uniform(3)).size(), 12u);
  for (int n = 2; n <= 7; ++n) {
    const TeamConfig team = TeamConfig::Uniform(n);
    EXPECT_EQ(default_full_graph(team).size(), static_cast<std::size_t>(4 * n * (n - 1) / 2));
    EXPECT_EQ(default_full_graph(team).size(), enumerate_cross_pairs(team));
  }
}

TEST(RangeGraphTest, MaskRemovesOnlyThePair) {
  const TeamConfig seven = TeamConfig::Uniform(7);
  const RangeGraph masked = mask_edges(default_full_graph(seven), {1, 2}, seven);
  EXPECT_EQ(masked.size(), 80u);
  EXPECT_EQ(masked.size(), enumerate_cross_pairs(seven, 1, 2));

  const TeamConfig three = TeamConfig::Uniform(3);
  EXPECT_EQ(mask_edges(default_full_graph(three), {2, 3}, three).size(), 8u);

  const TeamConfig two = TeamConfig::Uniform(2);
  EXPECT_TRUE(mask_edges(default_full_graph(two), {1, 2}, two).empty());
}

TEST(RangeGraphTest, MaskIsIdempotent) {
  const TeamConfig team = TeamConfig::Uniform(4);
  const RangeGraph once = mask_edges(default_full_graph(team), {2, 4}, team);
  EXPECT_EQ(mask_edges(once, {2, 4}, team), once);
  EXPECT_THROW(mask_edges(once, {2, 9}, team), std::out_of_range);
}

TEST(RangeGraphTest, AddValidates) {
  const TeamConfig team = TeamConfig::Uniform(2);
  RangeGraph g;
  EXPECT_THROW(g.add(team, Edge(1, 1)), std::invalid_argument);
  EXPECT_THROW(g.add(team, Edge(1, 2)), std::invalid_argument);
  EXPECT_THROW(g.add(team, Edge(1, 3), 0.0), std::invalid_argument);
  g.add(team, Edge(3, 1), 0.2);
  EXPECT_TRUE(g.contains(Edge(1, 3)));
  EXPECT_DOUBLE_EQ(g.sigma(Edge(1, 3)), 0.2);
}

TEST(RangeGraphTest, IterationIsLexicographic) {
  const std::vector<Edge> edges = default_full_graph(TeamConfig::Uniform(3)).edges();
  for (std::size_t k = 1; k < edges.size(); ++k) EXPECT_LT(edges[k - 1], edges[k]);
  EXPECT_EQ(edges.front(), Edge(1, 3));
}

TEST(FormationSpecTest, Validation) {
  FormationSpec spec = FormationSpec::Line(3);
  EXPECT_NO_THROW(spec.validate(3));
  EXPECT_THROW(spec.validate(4), std::invalid_argument);
  spec.lambda = 1.5;
  EXPECT_THROW(spec.validate(3), std::invalid_argument);
  spec = FormationSpec::Line(3);
  spec.collision_radius = 1.0;
  EXPECT_THROW(spec.validate(3), std::invalid_argument);
  spec = FormationSpec::Line(3);
  spec.directions[0] = Vec2(1.0, 1.0);
  EXPECT_THROW(spec.validate(3), std::invalid_argument);
  EXPECT_THROW(unit_direction(Vec2::Zero()), std::invalid_argument);
  EXPECT_NEAR(unit_direction(Vec2(1.0, 1.0)).norm(), 1.0, 1e-15);
}

}  // namespace
}  // namespace formation

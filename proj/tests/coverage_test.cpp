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

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "oracles.hpp"

namespace formation {
namespace {

TEST(WaypointsTest, LegCountAndRectilinearPath) {
  const Area area{10.0, 24.0};
  EXPECT_EQ(generate_waypoints(area, 10.0).size(), 2u);
  EXPECT_EQ(generate_waypoints(area, 5.0).size(), 4u);
  EXPECT_EQ(generate_waypoints(area, 3.0).size(), 8u);
  const std::vector<Vec2> w = generate_waypoints(area, 2.7);
  for (std::size_t k = 1; k < w.size(); ++k) {
    const Vec2 d = w[k] - w[k - 1];
    EXPECT_TRUE((d.x() == 0.0) != (d.y() == 0.0)) << "corner " << k;
  }
  for (const Vec2& p : w) {
    EXPECT_GE(p.x(), 0.0);
    EXPECT_LE(p.x(), 10.0);
  }
}

TEST(WaypointsTest, WiderSweepNeverAddsWaypoints) {
  const Area area{10.0, 24.0};
  std::size_t previous = generate_waypoints(area, 0.5).size();
  for (double s = 0.55; s <= 10.0; s += 0.05) {
    const std::size_t count = generate_waypoints(area, s).size();
    EXPECT_LE(count, previous) << "sweep " << s;
    previous = count;
  }
}

TEST(WaypointsTest, RejectsBadSweep) {
  EXPECT_THROW(generate_waypoints(Area{}, 0.0), std::invalid_argument);
  EXPECT_THROW(generate_waypoints(Area{10.0, 24.0}, 11.0), std::invalid_argument);
}

TEST(SweepWidthTest, SimpleUnions) {
  const TeamConfig one = TeamConfig::Uniform(2, 0.5);
  // Two tangent disks in a horizontal line span 4r.
  EXPECT_NEAR(formation_sweep_width(FormationState({Pose2::FromAngle(0.0, Vec2(1.0, 0.0))}), one),
              2.0, 1e-15);
  // Disks stacked vertically cover only 2r.
  EXPECT_NEAR(formation_sweep_width(FormationState({Pose2::FromAngle(0.0, Vec2(0.0, 3.0))}), one),
              1.0, 1e-15);
  // Disjoint projections keep the largest connected piece.
  EXPECT_NEAR(formation_sweep_width(FormationState({Pose2::FromAngle(0.0, Vec2(5.0, 0.0))}), one),
              1.0, 1e-15);
}

TEST(SweepWidthTest, AgreesWithRasterization) {
  std::mt19937_64 rng(31);
  const TeamConfig team = TeamConfig::Uniform(5, 0.5);
  for (int k = 0; k < 10; ++k) {
    const FormationState x = oracle::random_state(5, rng, 1.5);
    EXPECT_NEAR(formation_sweep_width(x, team), oracle::raster_sweep_width(x, team), 0.01);
  }
}

TEST(ControlTest, InFormationAtWaypointIsStill) {
  const FormationState x_des({Pose2::FromAngle(0.0, Vec2(1.0, 0.0)),
                              Pose2::FromAngle(0.0, Vec2(2.0, 0.0))});
  const Pose2 leader = Pose2::FromAngle(0.0, Vec2(3.0, 4.0));
  std::vector<Pose2> truth{leader};
  for (const Pose2& p : x_des.poses()) truth.push_back(compose(leader, p));
  for (const Twist2& u : control_step(Vec2(3.0, 4.0), truth, x_des, ControlGains{})) {
    EXPECT_EQ(u.phi, 0.0);
    EXPECT_EQ(u.rho, Vec2::Zero());
  }
}

TEST(ControlTest, LeaderSpeedSaturates) {
  // Leader faces +y and is 1 m short of the waypoint along +y.
  const double half_pi = std::numbers::pi / 2.0;
  const FormationState x_des({Pose2::FromAngle(0.0, Vec2(1.0, 0.0))});
  const Pose2 leader = Pose2::FromAngle(half_pi, Vec2(0.0, 0.0));
  const std::vector<Pose2> truth{leader, compose(leader, x_des.poses()[0])};
  ControlGains gains;
  gains.k_waypoint = 1.0;
  gains.speed_cap = 0.5;
  const std::vector<Twist2> u = control_step(Vec2(0.0, 1.0), truth, x_des, gains, half_pi);
  EXPECT_NEAR(u[0].phi, 0.0, 1e-15);
  EXPECT_NEAR(u[0].rho.x(), 0.5, 1e-15);
  EXPECT_NEAR(u[0].rho.y(), 0.0, 1e-15);
}

TEST(ControlTest, FollowerPullsTowardSlot) {
  const FormationState x_des({Pose2::FromAngle(0.0, Vec2(1.0, 0.0))});
  const std::vector<Pose2> truth{Pose2(), Pose2::FromAngle(0.0, Vec2(1.0, 0.2))};
  const std::vector<Twist2> u = control_step(Vec2::Zero(), truth, x_des, ControlGains{});
  EXPECT_NEAR(u[1].rho.x(), 0.0, 1e-15);
  EXPECT_NEAR(u[1].rho.y(), -1.2 * 0.2, 1e-15);
  EXPECT_NEAR(formation_error(truth, x_des), 0.2, 1e-15);
}

TEST(ControlTest, RejectsNonPositiveGains) {
  ControlGains g;
  g.k_heading = 0.0;
  const FormationState x_des({Pose2::FromAngle(0.0, Vec2(1.0, 0.0))});
  EXPECT_THROW(control_step(Vec2::Zero(), {Pose2(), Pose2()}, x_des, g), std::invalid_argument);
}

}  // namespace
}  // namespace formation

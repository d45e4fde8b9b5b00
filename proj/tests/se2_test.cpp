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

#include "formation/se2.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "oracles.hpp"

namespace formation {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Se2Test, ExpOfQuarterTurnMatchesClosedForm) {
  const Pose2 T = exp(Twist2(kPi / 2.0, 1.0, 0.0));
  EXPECT_NEAR(T.r().x(), 2.0 / kPi, 1e-14);
  EXPECT_NEAR(T.r().y(), 2.0 / kPi, 1e-14);
  EXPECT_NEAR(T.angle(), kPi / 2.0, 1e-14);
}

TEST(Se2Test, ExpMatchesMatrixSeries) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 0; k < 200; ++k) {
    const Eigen::Vector3d xi(u(rng), u(rng), u(rng));
    const Pose2 a = exp(Twist2::FromVector(xi));
    const Pose2 b = oracle::perturb(Pose2(), xi);
    EXPECT_LT((a.matrix() - b.matrix()).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Se2Test, ZeroTwistIsIdentity) {
  const Pose2 T = exp(Twist2());
  EXPECT_TRUE(T.C().isApprox(Mat2::Identity()));
  EXPECT_EQ(T.r(), Vec2::Zero());
}

TEST(Se2Test, SmallAngleBranchIsContinuous) {
  const Pose2 a = exp(Twist2(0.0, 1.0, 2.0));
  const Pose2 b = exp(Twist2(1e-9, 1.0, 2.0));
  const Pose2 c = exp(Twist2(2e-7, 1.0, 2.0));
  EXPECT_LT((a.r() - b.r()).norm(), 1e-8);
  EXPECT_LT((a.r() - c.r()).norm(), 1e-6);
  const Twist2 back = log(b);
  EXPECT_NEAR(back.phi, 1e-9, 1e-15);
  EXPECT_NEAR(back.rho.x(), 1.0, 1e-12);
}

TEST(Se2Test, LogInvertsExp) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> phi(-kPi + 1e-6, kPi - 1e-6);
  std::uniform_real_distribution<double> rho(-5.0, 5.0);
  for (int k = 0; k < 1000; ++k) {
    const Twist2 xi(phi(rng), rho(rng), rho(rng));
    const Twist2 back = log(exp(xi));
    EXPECT_LT((back.ToVector() - xi.ToVector()).norm(), 1e-9);
  }
}

TEST(Se2Test, GroupLaws) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 100; ++k) {
    const Pose2 a = Pose2::FromAngle(u(rng), Vec2(u(rng), u(rng)));
    const Pose2 b = Pose2::FromAngle(u(rng), Vec2(u(rng), u(rng)));
    const Pose2 c = Pose2::FromAngle(u(rng), Vec2(u(rng), u(rng)));
    const Pose2 ab_c = compose(compose(a, b), c);
    const Pose2 a_bc = compose(a, compose(b, c));
    EXPECT_LT((ab_c.matrix() - a_bc.matrix()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((compose(a, inverse(a)).matrix() - Eigen::Matrix3d::Identity())
                  .cwiseAbs()
                  .maxCoeff(),
              1e-12);
    EXPECT_LT((compose(a, Pose2()).matrix() - a.matrix()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((a.matrix() * b.matrix() - compose(a, b).matrix()).cwiseAbs().maxCoeff(),
              1e-12);
  }
}

TEST(Se2Test, AdjointConjugatesExp) {
  const Pose2 T = Pose2::FromAngle(0.7, Vec2(1.5, -0.4));
  const Twist2 xi(0.3, -0.2, 0.9);
  const Pose2 lhs = exp(Twist2::FromVector(adjoint(T) * xi.ToVector()));
  const Pose2 rhs = compose(compose(T, exp(xi)), inverse(T));
  EXPECT_LT((lhs.matrix() - rhs.matrix()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Se2Test, LongComposeChainsStayOnTheGroup) {
  Pose2 T;
  const Pose2 step = exp(Twist2(0.013, 0.01, 0.002));
  for (int k = 0; k < 5000; ++k) T = compose(T, step);
  EXPECT_LE(T.chain_length(), kRenormalizeAfter);
  EXPECT_NEAR(T.C().determinant(), 1.0, 1e-13);
  EXPECT_LT((T.C().transpose() * T.C() - Mat2::Identity()).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Se2Test, WrapAngle) {
  EXPECT_NEAR(wrap_angle(3.0 * kPi), kPi, 1e-12);
  EXPECT_NEAR(wrap_angle(-0.5), -0.5, 0.0);
  EXPECT_NEAR(wrap_angle(2.0 * kPi + 0.25), 0.25, 1e-12);
}

TEST(FormationStateTest, OplusZeroIsIdentity) {
  std::mt19937_64 rng(2);
  const FormationState x = oracle::random_state(4, rng);
  const FormationState y = oplus(x, Eigen::VectorXd::Zero(x.dof()));
  for (std::size_t k = 0; k < x.poses().size(); ++k) {
    EXPECT_EQ(y.poses()[k].matrix(), x.poses()[k].matrix());
  }
}

TEST(FormationStateTest, OplusRightMultipliesEachPose) {
  std::mt19937_64 rng(9);
  const FormationState x = oracle::random_state(3, rng);
  Eigen::VectorXd dx(6);
  dx << 0.1, -0.2, 0.3, -0.05, 0.4, 0.0;
  const FormationState y = oplus(x, dx);
  for (int p = 0; p < 2; ++p) {
    const Pose2 expect = oracle::perturb(x.poses()[static_cast<std::size_t>(p)],
                                         dx.segment<3>(3 * p));
    EXPECT_LT((y.poses()[static_cast<std::size_t>(p)].matrix() - expect.matrix())
                  .cwiseAbs()
                  .maxCoeff(),
              1e-12);
  }
}

TEST(FormationStateTest, OplusRejectsWrongSize) {
  const FormationState x({Pose2(), Pose2()});
  EXPECT_THROW(oplus(x, Eigen::VectorXd::Zero(5)), std::invalid_argument);
}

TEST(FormationStateTest, PoseLookup) {
  const FormationState x({Pose2::FromAngle(0.2, Vec2(1.0, 2.0))});
  EXPECT_EQ(x.robot_count(), 2);
  EXPECT_EQ(x.pose(1).matrix(), Eigen::Matrix3d::Identity());
  EXPECT_EQ(x.pose(2).r(), Vec2(1.0, 2.0));
  EXPECT_THROW(x.pose(3), std::out_of_range);
  EXPECT_EQ(relative_position(x, 2, 1), Vec2(1.0, 2.0));
}

}  // namespace
}  // namespace formation

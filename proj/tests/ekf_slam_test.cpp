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

#include "formation/ekf_slam.hpp"

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "gtest/gtest.h"
#include "oracles.hpp"

namespace formation {
namespace {

EkfState two_robot_state() {
  return make_ekf_state({Pose2(), Pose2::FromAngle(0.2, Vec2(1.5, 0.3))}, 2, 0.05, 0.1);
}

double min_eigenvalue(const Eigen::MatrixXd& P) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(P, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .minCoeff();
}

TEST(EkfPredictTest, ZeroInputZeroNoiseIsNoOp) {
  const EkfState s = two_robot_state();
  const EkfState p = ekf_predict(s, {Twist2(), Twist2()}, ProcessNoise{0.0, 0.0}, 0.01);
  EXPECT_EQ(p.covariance, s.covariance);
  EXPECT_EQ(p.robots[1].matrix(), s.robots[1].matrix());
}

TEST(EkfPredictTest, ForwardVelocityIntegrates) {
  EkfState s = make_ekf_state({Pose2()}, 0, 0.05, 0.1);
  for (int k = 0; k < 100; ++k) apply_predict(s, {Twist2(0.0, 0.5, 0.0)}, ProcessNoise{}, 0.01);
  EXPECT_NEAR(s.robots[0].r().x(), 0.5, 1e-12);
  EXPECT_NEAR(s.robots[0].r().y(), 0.0, 1e-15);
}

TEST(EkfPredictTest, TraceNeverShrinks) {
  EkfState s = two_robot_state();
  double trace = s.covariance.trace();
  for (int k = 0; k < 200; ++k) {
    apply_predict(s, {Twist2(0.3, 0.5, -0.1), Twist2(-0.2, 0.1, 0.4)}, ProcessNoise{}, 0.01);
    EXPECT_GE(s.covariance.trace(), trace - 1e-15);
    trace = s.covariance.trace();
  }
}

TEST(EkfRangeUpdateTest, ExactMeasurementKeepsMeanAndContracts) {
  EkfState s = two_robot_state();
  const RangeEndpoint a = RangeEndpoint::Robot(0, Vec2(0.17, -0.17));
  const RangeEndpoint b = RangeEndpoint::Robot(1, Vec2(-0.17, 0.17));
  const double exact = (endpoint_position(s, a) - endpoint_position(s, b)).norm();
  const Eigen::MatrixXd before = s.covariance;
  const UpdateOutcome o = apply_range_update(s, a, b, exact, 0.1);
  EXPECT_TRUE(o.accepted);
  EXPECT_NEAR(o.nis, 0.0, 1e-20);
  EXPECT_LT((s.robots[1].r() - Vec2(1.5, 0.3)).norm(), 1e-15);
  EXPECT_LT(s.covariance.trace(), before.trace());
  EXPECT_GE(min_eigenvalue(before - s.covariance), -1e-12);
  EXPECT_LT((s.covariance - s.covariance.transpose()).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(EkfRangeUpdateTest, GatesOutliers) {
  EkfState s = two_robot_state();
  const RangeEndpoint a = RangeEndpoint::Robot(0, Vec2(0.17, -0.17));
  const RangeEndpoint b = RangeEndpoint::Robot(1, Vec2(-0.17, 0.17));
  const EkfState before = s;
  const UpdateOutcome o = apply_range_update(s, a, b, 25.0, 0.1);
  EXPECT_FALSE(o.accepted);
  EXPECT_GT(o.nis, kRangeGate);
  EXPECT_EQ(s.covariance, before.covariance);
}

TEST(EkfRangeUpdateTest, UninitializedLandmarkThrows) {
  EkfState s = two_robot_state();
  EXPECT_THROW(apply_range_update(s, RangeEndpoint::Robot(0, Vec2::Zero()),
                                  RangeEndpoint::Landmark(0), 1.0, 0.1),
               std::exception);
}

TEST(EkfGpsUpdateTest, ConvergesToSteadyState) {
  EkfState s = make_ekf_state({Pose2()}, 0, 0.05, 1.0);
  const double sigma = 0.1;
  const UpdateOutcome o = apply_gps_update(s, Vec2::Zero(), sigma);
  EXPECT_TRUE(o.accepted);
  EXPECT_EQ(s.robots[0].r(), Vec2::Zero());
  double var = s.covariance(1, 1);
  // Scalar Kalman oracle: 1 / P+ = 1 / P- + 1 / R.
  EXPECT_NEAR(var, 1.0 / (1.0 / 1.0 + 1.0 / (sigma * sigma)), 1e-12);
  for (int k = 0; k < 500; ++k) {
    apply_predict(s, {Twist2()}, ProcessNoise{}, 0.02);
    apply_gps_update(s, Vec2::Zero(), sigma);
  }
  var = s.covariance(1, 1);
  EXPECT_LE(var, sigma * sigma);
}

TEST(EkfGpsUpdateTest, GpsBoundsDrift) {
  EkfState with = make_ekf_state({Pose2()}, 0, 0.05, 0.1);
  EkfState without = with;
  for (int k = 0; k < 3000; ++k) {
    apply_predict(with, {Twist2(0.0, 1.0, 0.0)}, ProcessNoise{}, 0.01);
    apply_predict(without, {Twist2(0.0, 1.0, 0.0)}, ProcessNoise{}, 0.01);
    if (k % 2 == 0) apply_gps_update(with, with.robots[0].r(), 0.1);
  }
  const double pos_with = with.covariance.block<2, 2>(1, 1).trace();
  const double pos_without = without.covariance.block<2, 2>(1, 1).trace();
  EXPECT_LT(pos_with, 0.02);
  EXPECT_GT(pos_without, 10.0 * pos_with);
}

TEST(TrilaterationTest, RecoversLandmarkFromExactRanges) {
  const Vec2 landmark(2.0, 3.0);
  const std::vector<Vec2> anchors{Vec2(0.0, 0.0), Vec2(4.0, 0.5), Vec2(1.0, 5.0),
                                  Vec2(3.5, 4.5)};
  std::vector<RangeSample> samples;
  std::vector<double> ranges;
  for (const Vec2& a : anchors) {
    samples.push_back({a, (landmark - a).norm()});
    ranges.push_back((landmark - a).norm());
  }
  TrilaterationOptions opt;
  opt.min_samples = 3;
  const auto fix = trilaterate(samples, 0.1, opt);
  ASSERT_TRUE(fix.has_value());
  EXPECT_LT((fix->position - landmark).norm(), 1e-9);
  EXPECT_LT((oracle::circle_intersection(anchors, ranges) - fix->position).norm(), 1e-9);
}

TEST(TrilaterationTest, NoisyTriangleIsAccurate) {
  const Vec2 landmark(1.0, 1.0);
  std::mt19937_64 rng(41);
  std::normal_distribution<double> noise(0.0, 0.1);
  std::vector<RangeSample> samples;
  for (int k = 0; k < 60; ++k) {
    const Vec2 a = k % 3 == 0 ? Vec2(-1.0, -1.0) : k % 3 == 1 ? Vec2(3.0, -0.5) : Vec2(1.0, 3.0);
    samples.push_back({a, (landmark - a).norm() + noise(rng)});
  }
  TrilaterationOptions opt;
  const auto fix = trilaterate(samples, 0.1, opt);
  ASSERT_TRUE(fix.has_value());
  EXPECT_LT((fix->position - landmark).norm(), 0.1);
  EXPECT_GT(fix->covariance.determinant(), 0.0);
}

TEST(TrilaterationTest, AnchorUncertaintyWidensCovariance) {
  const Vec2 landmark(2.0, 3.0);
  std::vector<RangeSample> samples;
  Eigen::Matrix2d JtJ = Eigen::Matrix2d::Zero();
  for (const Vec2& a : {Vec2(0.0, 0.0), Vec2(4.0, 0.5), Vec2(1.0, 5.0), Vec2(3.5, 4.5)}) {
    samples.push_back({a, (landmark - a).norm()});
    const Vec2 u = (landmark - a).normalized();
    JtJ += u * u.transpose();
  }
  TrilaterationOptions opt;
  const auto exact = trilaterate(samples, 0.1, opt);
  ASSERT_TRUE(exact.has_value());
  const Eigen::Matrix2d expect = opt.covariance_inflation * 0.01 * JtJ.inverse();
  EXPECT_LT((exact->covariance - expect).cwiseAbs().maxCoeff(), 1e-12);

  for (RangeSample& s : samples) s.anchor_covariance = 0.03 * Eigen::Matrix2d::Identity();
  const auto widened = trilaterate(samples, 0.1, opt);
  ASSERT_TRUE(widened.has_value());
  EXPECT_LT((widened->position - landmark).norm(), 1e-9);
  EXPECT_LT((widened->covariance - expect - 0.03 * Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff(),
            1e-12);
}

TEST(TrilaterationTest, DefersWithoutGeometry) {
  const Vec2 landmark(1.0, 2.0);
  std::vector<RangeSample> two{{Vec2(0.0, 0.0), landmark.norm()},
                               {Vec2(2.0, 0.0), (landmark - Vec2(2.0, 0.0)).norm()}};
  EXPECT_FALSE(trilaterate(two, 0.1, TrilaterationOptions{}).has_value());

  std::vector<RangeSample> collinear;
  for (int k = 0; k < 10; ++k) {
    const Vec2 a(0.3 * k, 0.0);
    collinear.push_back({a, (landmark - a).norm()});
  }
  EXPECT_FALSE(trilaterate(collinear, 0.1, TrilaterationOptions{}).has_value());
}

TEST(LandmarkInitTest, AppendsBlockWithoutCrossCovariance) {
  const EkfState s = two_robot_state();
  const Vec2 landmark(2.0, 3.0);
  std::vector<RangeSample> samples;
  for (const Vec2& a : {Vec2(0.0, 0.0), Vec2(4.0, 0.5), Vec2(1.0, 5.0)}) {
    samples.push_back({a, (landmark - a).norm()});
  }
  bool ok = false;
  const EkfState out = landmark_init(s, 1, samples, 0.1, TrilaterationOptions{}, &ok);
  ASSERT_TRUE(ok);
  EXPECT_TRUE(out.has_landmark(1));
  EXPECT_FALSE(out.has_landmark(0));
  EXPECT_EQ(out.dim(), s.dim() + 2);
  EXPECT_LT((out.landmark(1) - landmark).norm(), 1e-9);
  EXPECT_EQ(out.covariance.topRightCorner(s.dim(), 2), Eigen::MatrixXd::Zero(s.dim(), 2));
  EXPECT_GT(min_eigenvalue(out.landmark_covariance(1)), 0.0);

  std::vector<RangeSample> few(samples.begin(), samples.begin() + 2);
  const EkfState same = landmark_init(s, 1, few, 0.1, TrilaterationOptions{}, &ok);
  EXPECT_FALSE(ok);
  EXPECT_EQ(same.dim(), s.dim());
}

TEST(LandmarkInitTest, RepeatedRangesShrinkLandmarkCovariance) {
  const Vec2 landmark(2.0, 3.0);
  std::vector<RangeSample> samples;
  for (const Vec2& a : {Vec2(0.0, 0.0), Vec2(4.0, 0.5), Vec2(1.0, 5.0)}) {
    samples.push_back({a, (landmark - a).norm()});
  }
  EkfState s = landmark_init(make_ekf_state({Pose2()}, 1, 0.05, 0.1), 0, samples, 0.1);
  ASSERT_TRUE(s.has_landmark(0));
  double previous = s.landmark_covariance(0).trace();
  for (int k = 0; k < 20; ++k) {
    const Vec2 offset = k % 2 == 0 ? Vec2(0.17, -0.17) : Vec2(-0.17, 0.17);
    const RangeEndpoint tag = RangeEndpoint::Robot(0, offset);
    const double exact = (landmark - endpoint_position(s, tag)).norm();
    apply_range_update(s, tag, RangeEndpoint::Landmark(0), exact, 0.1);
    const double now = s.landmark_covariance(0).trace();
    EXPECT_LE(now, previous + 1e-15);
    previous = now;
  }
}

}  // namespace
}  // namespace formation

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

#ifndef FORMATION_SE2_HPP_
#define FORMATION_SE2_HPP_

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace formation {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// 1-based robot identifier. Robot 1 is the reference robot.
using RobotId = int;

// Below this |phi| the left Jacobian V(phi) uses its Taylor expansion.
inline constexpr double kSmallAngle = 1e-7;

// Compose chains longer than this re-project the rotation onto SO(2).
inline constexpr int kRenormalizeAfter = 100;

/// Element of se(2), ordered as [phi, rho_x, rho_y].
struct Twist2 {
  double phi = 0.0;
  Vec2 rho = Vec2::Zero();

  Twist2() = default;
  Twist2(double phi_in, double rho_x, double rho_y)
      : phi(phi_in), rho(rho_x, rho_y) {}
  Twist2(double phi_in, const Vec2& rho_in) : phi(phi_in), rho(rho_in) {}

  static Twist2 FromVector(const Vec3& v) { return {v(0), v(1), v(2)}; }
  Vec3 ToVector() const { return {phi, rho.x(), rho.y()}; }
};

/// Planar rigid transform. `C` rotates vectors from the child frame into the
/// parent frame and `r` is the child origin resolved in the parent frame.
class Pose2 {
 public:
  Pose2() = default;
  Pose2(const Mat2& C, const Vec2& r);

  static Pose2 Identity() { return Pose2(); }
  static Pose2 FromAngle(double theta, const Vec2& r = Vec2::Zero());

  const Mat2& C() const { return C_; }
  const Vec2& r() const { return r_; }
  double angle() const;

  // Number of composes since the rotation was last projected onto SO(2).
  int chain_length() const { return chain_; }

  // Maps a point given in the child frame into the parent frame.
  Vec2 operator*(const Vec2& p) const { return C_ * p + r_; }

  Eigen::Matrix3d matrix() const;

 private:
  friend Pose2 compose(const Pose2& a, const Pose2& b);

  Mat2 C_ = Mat2::Identity();
  Vec2 r_ = Vec2::Zero();
  std::int32_t chain_ = 0;
};

Pose2 compose(const Pose2& a, const Pose2& b);
Pose2 inverse(const Pose2& a);

// Re-projects the rotation onto SO(2) through its angle.
Pose2 renormalize(const Pose2& a);

Mat2 rotation(double theta);

// Skew generator [[0,-1],[1,0]].
Mat2 skew();

// V(phi) such that exp([phi, rho]) has translation V(phi) * rho.
Mat2 left_jacobian_translation(double phi);

Pose2 exp(const Twist2& xi);
Twist2 log(const Pose2& T);

/// Adjoint of T acting on twists ordered [phi, rho].
Mat3 adjoint(const Pose2& T);

double wrap_angle(double a);

/// Poses of Robots 2..N relative to Robot 1. Robot 1's identity pose is
/// implicit and never stored.
class FormationState {
 public:
  FormationState() = default;
  explicit FormationState(std::vector<Pose2> poses) : poses_(std::move(poses)) {}

  // Number of robots including the reference.
  int robot_count() const { return static_cast<int>(poses_.size()) + 1; }
  // Length of the flat perturbation vector, 3(N-1).
  int dof() const { return 3 * static_cast<int>(poses_.size()); }

  const std::vector<Pose2>& poses() const { return poses_; }
  std::vector<Pose2>& mutable_poses() { return poses_; }

  // Pose of robot `id` relative to Robot 1 (identity for id == 1).
  Pose2 pose(RobotId id) const;

 private:
  std::vector<Pose2> poses_;
};

// x (+) dx: right-multiplies pose p by exp(dx_p) for every robot 2..N.
FormationState oplus(const FormationState& x, const Eigen::VectorXd& dx);

// Position of robot p relative to robot q, resolved in Robot 1's frame.
Vec2 relative_position(const FormationState& x, RobotId p, RobotId q);

}  // namespace formation

#endif  // FORMATION_SE2_HPP_

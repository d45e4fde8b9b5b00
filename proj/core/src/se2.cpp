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
#include <stdexcept>
#include <string>

#include <Eigen/LU>

namespace formation {

Pose2::Pose2(const Mat2& C, const Vec2& r) : C_(C), r_(r) {}

Pose2 Pose2::FromAngle(double theta, const Vec2& r) {
  return Pose2(rotation(theta), r);
}

double Pose2::angle() const { return std::atan2(C_(1, 0), C_(0, 0)); }

Eigen::Matrix3d Pose2::matrix() const {
  Eigen::Matrix3d T = Eigen::Matrix3d::Identity();
  T.topLeftCorner<2, 2>() = C_;
  T.topRightCorner<2, 1>() = r_;
  return T;
}

Pose2 compose(const Pose2& a, const Pose2& b) {
  Pose2 out(a.C_ * b.C_, a.C_ * b.r_ + a.r_);
  out.chain_ = std::max(a.chain_, b.chain_) + 1;
  if (out.chain_ > kRenormalizeAfter) {
    out = renormalize(out);
  }
  return out;
}

Pose2 inverse(const Pose2& a) {
  const Mat2 Ct = a.C().transpose();
  return Pose2(Ct, -Ct * a.r());
}

Pose2 renormalize(const Pose2& a) { return Pose2::FromAngle(a.angle(), a.r()); }

Mat2 rotation(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Mat2 C;
  C << c, -s, s, c;
  return C;
}

Mat2 skew() {
  Mat2 J;
  J << 0.0, -1.0, 1.0, 0.0;
  return J;
}

Mat2 left_jacobian_translation(double phi) {
  Mat2 V;
  if (std::abs(phi) < kSmallAngle) {
    // Second-order expansion of sin(phi)/phi and (1 - cos(phi))/phi.
    const double a = 1.0 - phi * phi / 6.0;
    const double b = phi / 2.0;
    V << a, -b, b, a;
    return V;
  }
  const double a = std::sin(phi) / phi;
  const double b = (1.0 - std::cos(phi)) / phi;
  V << a, -b, b, a;
  return V;
}

Pose2 exp(const Twist2& xi) {
  return Pose2(rotation(xi.phi), left_jacobian_translation(xi.phi) * xi.rho);
}

Twist2 log(const Pose2& T) {
  const double phi = T.angle();
  const Mat2 V = left_jacobian_translation(phi);
  return Twist2(phi, V.inverse() * T.r());
}

Mat3 adjoint(const Pose2& T) {
  Mat3 Ad = Mat3::Zero();
  Ad(0, 0) = 1.0;
  Ad(1, 0) = T.r().y();
  Ad(2, 0) = -T.r().x();
  Ad.bottomRightCorner<2, 2>() = T.C();
  return Ad;
}

double wrap_angle(double a) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  a = std::fmod(a + std::numbers::pi, kTwoPi);
  if (a <= 0.0) a += kTwoPi;
  return a - std::numbers::pi;
}

Pose2 FormationState::pose(RobotId id) const {
  if (id < 1 || id > robot_count()) {
    throw std::out_of_range("unknown robot id " + std::to_string(id));
  }
  if (id == 1) return Pose2::Identity();
  return poses_[static_cast<std::size_t>(id - 2)];
}

FormationState oplus(const FormationState& x, const Eigen::VectorXd& dx) {
  if (dx.size() != x.dof()) {
    throw std::invalid_argument("oplus: perturbation has length " +
                                std::to_string(dx.size()) + ", expected " +
                                std::to_string(x.dof()));
  }
  std::vector<Pose2> out;
  out.reserve(x.poses().size());
  for (std::size_t p = 0; p < x.poses().size(); ++p) {
    const Vec3 d = dx.segment<3>(static_cast<Eigen::Index>(3 * p));
    out.push_back(compose(x.poses()[p], exp(Twist2::FromVector(d))));
  }
  return FormationState(std::move(out));
}

Vec2 relative_position(const FormationState& x, RobotId p, RobotId q) {
  return x.pose(p).r() - x.pose(q).r();
}

}  // namespace formation

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

#include "formation/ranging.hpp"

#include <string>

namespace formation {

Vec2 tag_position(const FormationState& x, const TeamConfig& team, TagId tag) {
  const TagLocation& loc = team.tag(tag);
  if (loc.is_landmark()) {
    return team.landmarks()[static_cast<std::size_t>(loc.local_index)];
  }
  const Vec2& offset =
      team.robot(loc.robot).tag_offsets[static_cast<std::size_t>(loc.local_index)];
  return x.pose(loc.robot) * offset;
}

double predict_range(const FormationState& x, const TeamConfig& team, Edge edge) {
  return (tag_position(x, team, edge.i) - tag_position(x, team, edge.j)).norm();
}

MeasurementVector predict_all(const FormationState& x, const TeamConfig& team,
                              const RangeGraph& graph) {
  MeasurementVector y(static_cast<Eigen::Index>(graph.size()));
  Eigen::Index row = 0;
  for (const auto& [e, sigma] : graph.entries()) {
    y(row++) = predict_range(x, team, e);
  }
  return y;
}

Eigen::Matrix<double, 2, 3> tag_position_jacobian(const Pose2& T,
                                                  const Vec2& offset) {
  // T exp(dxi) o = C exp(dphi) o + C V(dphi) drho + r; differentiate at 0.
  Eigen::Matrix<double, 2, 3> J;
  J.col(0) = T.C() * (skew() * offset);
  J.rightCols<2>() = T.C();
  return J;
}

JacobianMatrix jacobian(const FormationState& x, const TeamConfig& team,
                        const RangeGraph& graph) {
  JacobianMatrix H =
      JacobianMatrix::Zero(static_cast<Eigen::Index>(graph.size()), x.dof());
  Eigen::Index row = 0;
  for (const auto& [e, sigma] : graph.entries()) {
    const Vec2 rho = tag_position(x, team, e.i) - tag_position(x, team, e.j);
    const double range = rho.norm();
    if (range < kMinRange) {
      throw SingularGeometryError("zero predicted range on edge (" +
                                  std::to_string(e.i) + ", " +
                                  std::to_string(e.j) + ")");
    }
    const Eigen::RowVector2d u = (rho / range).transpose();
    const auto accumulate = [&](TagId tag, double sign) {
      const TagLocation& loc = team.tag(tag);
      if (loc.is_landmark() || loc.robot == 1) return;
      const Vec2& offset =
          team.robot(loc.robot).tag_offsets[static_cast<std::size_t>(loc.local_index)];
      const Eigen::Index col = 3 * (loc.robot - 2);
      H.block<1, 3>(row, col) +=
          sign * u * tag_position_jacobian(x.pose(loc.robot), offset);
    };
    accumulate(e.i, 1.0);
    accumulate(e.j, -1.0);
    ++row;
  }
  return H;
}

FisherMatrix fisher(const FormationState& x, const TeamConfig& team,
                    const RangeGraph& graph) {
  const JacobianMatrix H = jacobian(x, team, graph);
  Eigen::VectorXd w(H.rows());
  Eigen::Index row = 0;
  for (const auto& [e, sigma] : graph.entries()) {
    w(row++) = 1.0 / (sigma * sigma);
  }
  FisherMatrix F = H.transpose() * w.asDiagonal() * H;
  return 0.5 * (F + F.transpose());
}

}  // namespace formation

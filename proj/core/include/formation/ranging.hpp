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

#ifndef FORMATION_RANGING_HPP_
#define FORMATION_RANGING_HPP_

#include <stdexcept>

#include <Eigen/Core>

#include "formation/se2.hpp"
#include "formation/team.hpp"

namespace formation {

// Ranges shorter than this make the norm gradient undefined.
inline constexpr double kMinRange = 1e-9;

class SingularGeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using MeasurementVector = Eigen::VectorXd;
using JacobianMatrix = Eigen::MatrixXd;
using FisherMatrix = Eigen::MatrixXd;

// Tag location resolved in Robot 1's frame.
Vec2 tag_position(const FormationState& x, const TeamConfig& team, TagId tag);

double predict_range(const FormationState& x, const TeamConfig& team, Edge edge);

MeasurementVector predict_all(const FormationState& x, const TeamConfig& team,
                              const RangeGraph& graph);

// d(tag position) / d(right perturbation of the carrying robot), 2x3.
Eigen::Matrix<double, 2, 3> tag_position_jacobian(const Pose2& T,
                                                  const Vec2& offset);

/// |E| x 3(N-1) Jacobian of predict_all with respect to the (+) perturbation,
/// evaluated at zero. Rows follow graph iteration order.
JacobianMatrix jacobian(const FormationState& x, const TeamConfig& team,
                        const RangeGraph& graph);

/// H^T R^{-1} H with R = diag(sigma_ij^2).
FisherMatrix fisher(const FormationState& x, const TeamConfig& team,
                    const RangeGraph& graph);

}  // namespace formation

#endif  // FORMATION_RANGING_HPP_

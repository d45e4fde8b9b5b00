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

#ifndef FORMATION_EKF_SLAM_HPP_
#define FORMATION_EKF_SLAM_HPP_

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "formation/se2.hpp"
#include "formation/team.hpp"

namespace formation {

// Chi-square gates at 99.98 %.
inline constexpr double kRangeGate = 13.8;  // 1 dof
inline constexpr double kGpsGate = 18.4;    // 2 dof

/// Global-frame SLAM state: N robot poses followed by the landmarks that
/// have been initialized so far. The error state of robot k is the right
/// perturbation [phi, rho] occupying rows 3k..3k+2; landmark l (in
/// initialization order) occupies two rows after the robot block.
struct EkfState {
  std::vector<Pose2> robots;
  std::vector<Vec2> landmarks;
  // landmark_slot[i] = position of landmark i in `landmarks`, or -1.
  std::vector<int> landmark_slot;
  Eigen::MatrixXd covariance;

  int dim() const {
    return 3 * static_cast<int>(robots.size()) + 2 * static_cast<int>(landmarks.size());
  }
  int robot_offset(int robot_index) const { return 3 * robot_index; }
  int landmark_offset(int landmark_index) const;
  bool has_landmark(int landmark_index) const {
    return landmark_index < static_cast<int>(landmark_slot.size()) &&
           landmark_slot[static_cast<std::size_t>(landmark_index)] >= 0;
  }
  const Vec2& landmark(int landmark_index) const;
  Eigen::Matrix2d landmark_covariance(int landmark_index) const;
};

// Robots at the given poses with a diagonal prior; no landmarks yet.
EkfState make_ekf_state(std::vector<Pose2> robots, int landmark_count,
                        double sigma_heading, double sigma_position);

// Velocity noise densities: a sample averaged over dt has standard
// deviation sigma / sqrt(dt).
struct ProcessNoise {
  double sigma_omega = 0.01;  // rad/s/sqrt(Hz)
  double sigma_v = 0.1;       // m/s/sqrt(Hz), per component
};

/// T <- T exp(dt u) for every robot; landmarks are static. The error state
/// is propagated through Ad(exp(-dt u)) with noise dt diag(sigma^2).
void apply_predict(EkfState& state, const std::vector<Twist2>& velocities,
                   const ProcessNoise& noise, double dt);

inline EkfState ekf_predict(EkfState state, const std::vector<Twist2>& velocities,
                            const ProcessNoise& noise, double dt) {
  apply_predict(state, velocities, noise, dt);
  return state;
}

/// One end of a range edge: a tag on a robot or a landmark tag.
struct RangeEndpoint {
  int robot_index = -1;      // 0-based; -1 for a landmark
  Vec2 offset = Vec2::Zero();
  int landmark_index = -1;

  static RangeEndpoint Robot(int index, const Vec2& body_offset) {
    return {index, body_offset, -1};
  }
  static RangeEndpoint Landmark(int index) { return {-1, Vec2::Zero(), index}; }
};

struct UpdateOutcome {
  bool accepted = false;
  double nis = 0.0;
};

// Estimated global position of an endpoint.
Vec2 endpoint_position(const EkfState& state, const RangeEndpoint& e);

// Marginal covariance of endpoint_position.
Eigen::Matrix2d endpoint_covariance(const EkfState& state, const RangeEndpoint& e);

/// Scalar range update with innovation gating (rejected updates leave the
/// state untouched). Throws if a landmark endpoint is not initialized.
UpdateOutcome apply_range_update(EkfState& state, const RangeEndpoint& a,
                                 const RangeEndpoint& b, double measured,
                                 double sigma);

/// Position update on Robot 1 (robot index 0) with isotropic noise.
UpdateOutcome apply_gps_update(EkfState& state, const Vec2& measured,
                               double sigma);

inline EkfState ekf_update_range(EkfState state, const RangeEndpoint& a,
                                 const RangeEndpoint& b, double measured,
                                 double sigma, UpdateOutcome* outcome = nullptr) {
  const UpdateOutcome o = apply_range_update(state, a, b, measured, sigma);
  if (outcome) *outcome = o;
  return state;
}

inline EkfState ekf_update_gps(EkfState state, const Vec2& measured, double sigma,
                               UpdateOutcome* outcome = nullptr) {
  const UpdateOutcome o = apply_gps_update(state, measured, sigma);
  if (outcome) *outcome = o;
  return state;
}

struct RangeSample {
  Vec2 anchor;   // estimated global tag position at measurement time
  double range = 0.0;
  Eigen::Matrix2d anchor_covariance = Eigen::Matrix2d::Zero();
};

struct TrilaterationResult {
  Vec2 position = Vec2::Zero();
  Eigen::Matrix2d covariance = Eigen::Matrix2d::Zero();
};

struct TrilaterationOptions {
  std::size_t min_samples = 3;
  double min_baseline = 0.5;        // anchor extent along the major axis, m
  double min_cross_baseline = 0.25; // anchor extent along the minor axis, m
  double max_residual_sigmas = 2.0; // RMS range residual bound, in sigma
  double max_condition = 1e6;
  double covariance_inflation = 10.0;
  int iterations = 20;
};

/// Nonlinear least-squares landmark fix from buffered ranges. The covariance
/// is the inflated range-noise normal-equation inverse plus the mean anchor
/// covariance; anchor errors share the fleet's drift, so that term does not
/// shrink with the sample count. Returns nullopt while the geometry cannot
/// resolve the landmark (too few samples, short baseline, near-collinear
/// anchors) or the RMS residual is too large.
std::optional<TrilaterationResult> trilaterate(
    const std::vector<RangeSample>& samples, double sigma,
    const TrilaterationOptions& options = {});

/// Appends landmark `landmark_index` when the buffered ranges trilaterate;
/// otherwise returns the state unchanged.
EkfState landmark_init(const EkfState& state, int landmark_index,
                       const std::vector<RangeSample>& samples, double sigma,
                       const TrilaterationOptions& options = {},
                       bool* initialized = nullptr);

// Mirrors the upper triangle onto the lower one.
void symmetrize(Eigen::MatrixXd& P);

}  // namespace formation

#endif  // FORMATION_EKF_SLAM_HPP_

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

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "formation/ranging.hpp"

namespace formation {
namespace {

// Sparse measurement row: at most two robot blocks and one landmark block.
struct SparseRow {
  std::array<int, 8> col{};
  std::array<double, 8> val{};
  int size = 0;
  void push(int c, double v) {
    col[static_cast<std::size_t>(size)] = c;
    val[static_cast<std::size_t>(size)] = v;
    ++size;
  }
};

void add_endpoint(const EkfState& s, const RangeEndpoint& e,
                  const Eigen::RowVector2d& u, double sign, SparseRow& row) {
  if (e.robot_index >= 0) {
    const Eigen::Matrix<double, 2, 3> J = tag_position_jacobian(
        s.robots[static_cast<std::size_t>(e.robot_index)], e.offset);
    const Eigen::RowVector3d h = sign * u * J;
    const int off = s.robot_offset(e.robot_index);
    for (int k = 0; k < 3; ++k) row.push(off + k, h(k));
  } else {
    const int off = s.landmark_offset(e.landmark_index);
    row.push(off, sign * u(0));
    row.push(off + 1, sign * u(1));
  }
}

void inject(EkfState& s, const Eigen::VectorXd& dx) {
  for (std::size_t k = 0; k < s.robots.size(); ++k) {
    const Vec3 d = dx.segment<3>(static_cast<Eigen::Index>(3 * k));
    s.robots[k] = compose(s.robots[k], exp(Twist2::FromVector(d)));
  }
  const Eigen::Index base = 3 * static_cast<Eigen::Index>(s.robots.size());
  for (std::size_t l = 0; l < s.landmarks.size(); ++l) {
    s.landmarks[l] += dx.segment<2>(base + 2 * static_cast<Eigen::Index>(l));
  }
}

}  // namespace

int EkfState::landmark_offset(int landmark_index) const {
  if (!has_landmark(landmark_index)) {
    throw std::out_of_range("landmark " + std::to_string(landmark_index) +
                            " is not initialized");
  }
  return 3 * static_cast<int>(robots.size()) +
         2 * landmark_slot[static_cast<std::size_t>(landmark_index)];
}

const Vec2& EkfState::landmark(int landmark_index) const {
  landmark_offset(landmark_index);
  return landmarks[static_cast<std::size_t>(
      landmark_slot[static_cast<std::size_t>(landmark_index)])];
}

Eigen::Matrix2d EkfState::landmark_covariance(int landmark_index) const {
  const int off = landmark_offset(landmark_index);
  return covariance.block<2, 2>(off, off);
}

EkfState make_ekf_state(std::vector<Pose2> robots, int landmark_count,
                        double sigma_heading, double sigma_position) {
  EkfState s;
  s.robots = std::move(robots);
  s.landmark_slot.assign(static_cast<std::size_t>(landmark_count), -1);
  const int n = s.dim();
  s.covariance = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < static_cast<int>(s.robots.size()); ++k) {
    s.covariance(3 * k, 3 * k) = sigma_heading * sigma_heading;
    s.covariance(3 * k + 1, 3 * k + 1) = sigma_position * sigma_position;
    s.covariance(3 * k + 2, 3 * k + 2) = sigma_position * sigma_position;
  }
  return s;
}

void symmetrize(Eigen::MatrixXd& P) {
  P.triangularView<Eigen::StrictlyLower>() = P.transpose();
}

void apply_predict(EkfState& state, const std::vector<Twist2>& velocities,
                   const ProcessNoise& noise, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("ekf_predict: dt must be positive");
  if (velocities.size() != state.robots.size()) {
    throw std::invalid_argument("ekf_predict: one velocity per robot required");
  }
  Eigen::MatrixXd& P = state.covariance;
  const double q_phi = dt * noise.sigma_omega * noise.sigma_omega;
  const double q_rho = dt * noise.sigma_v * noise.sigma_v;
  for (std::size_t k = 0; k < state.robots.size(); ++k) {
    const Twist2 step(dt * velocities[k].phi, dt * velocities[k].rho);
    const Pose2 increment = exp(step);
    state.robots[k] = compose(state.robots[k], increment);
    const Mat3 F = adjoint(inverse(increment));
    const Eigen::Index off = 3 * static_cast<Eigen::Index>(k);
    P.middleRows(off, 3) = F * P.middleRows(off, 3);
    P.middleCols(off, 3) = P.middleCols(off, 3) * F.transpose();
    P(off, off) += q_phi;
    P(off + 1, off + 1) += q_rho;
    P(off + 2, off + 2) += q_rho;
  }
  symmetrize(P);
}

Vec2 endpoint_position(const EkfState& state, const RangeEndpoint& e) {
  if (e.robot_index >= 0) {
    return state.robots[static_cast<std::size_t>(e.robot_index)] * e.offset;
  }
  return state.landmark(e.landmark_index);
}

Eigen::Matrix2d endpoint_covariance(const EkfState& state, const RangeEndpoint& e) {
  if (e.robot_index >= 0) {
    const Eigen::Matrix<double, 2, 3> J = tag_position_jacobian(
        state.robots[static_cast<std::size_t>(e.robot_index)], e.offset);
    const int off = state.robot_offset(e.robot_index);
    return J * state.covariance.block<3, 3>(off, off) * J.transpose();
  }
  return state.landmark_covariance(e.landmark_index);
}

UpdateOutcome apply_range_update(EkfState& state, const RangeEndpoint& a,
                                 const RangeEndpoint& b, double measured,
                                 double sigma) {
  const Vec2 rho = endpoint_position(state, a) - endpoint_position(state, b);
  const double predicted = rho.norm();
  if (predicted < kMinRange) return {};
  const Eigen::RowVector2d u = (rho / predicted).transpose();
  SparseRow row;
  add_endpoint(state, a, u, 1.0, row);
  add_endpoint(state, b, u, -1.0, row);

  Eigen::MatrixXd& P = state.covariance;
  Eigen::VectorXd PHt = Eigen::VectorXd::Zero(P.rows());
  for (int k = 0; k < row.size; ++k) {
    PHt += row.val[static_cast<std::size_t>(k)] * P.col(row.col[static_cast<std::size_t>(k)]);
  }
  double S = sigma * sigma;
  for (int k = 0; k < row.size; ++k) {
    S += row.val[static_cast<std::size_t>(k)] * PHt(row.col[static_cast<std::size_t>(k)]);
  }
  const double innovation = measured - predicted;
  UpdateOutcome out;
  out.nis = innovation * innovation / S;
  if (!(out.nis <= kRangeGate)) return out;
  out.accepted = true;

  const Eigen::VectorXd K = PHt / S;
  P.noalias() -= K * PHt.transpose();
  symmetrize(P);
  inject(state, K * innovation);
  return out;
}

UpdateOutcome apply_gps_update(EkfState& state, const Vec2& measured,
                               double sigma) {
  Eigen::MatrixXd& P = state.covariance;
  const Pose2& T = state.robots.front();
  // r_true = r + C drho, so H = [0 | C] on Robot 1's block.
  Eigen::MatrixXd PHt = P.middleCols(1, 2) * T.C().transpose();
  Eigen::Matrix2d S = T.C() * P.block<2, 2>(1, 1) * T.C().transpose();
  S.diagonal().array() += sigma * sigma;
  const Vec2 innovation = measured - T.r();
  const Eigen::Matrix2d S_inv = S.inverse();
  UpdateOutcome out;
  out.nis = innovation.dot(S_inv * innovation);
  if (!(out.nis <= kGpsGate)) return out;
  out.accepted = true;

  const Eigen::MatrixXd K = PHt * S_inv;
  P.noalias() -= K * PHt.transpose();
  symmetrize(P);
  inject(state, K * innovation);
  return out;
}

std::optional<TrilaterationResult> trilaterate(
    const std::vector<RangeSample>& samples, double sigma,
    const TrilaterationOptions& options) {
  const std::size_t n = samples.size();
  if (n < std::max<std::size_t>(3, options.min_samples)) return std::nullopt;

  Vec2 centroid = Vec2::Zero();
  double mean_sq = 0.0;
  double mean_range_sq = 0.0;
  for (const RangeSample& s : samples) {
    centroid += s.anchor;
    mean_sq += s.anchor.squaredNorm();
    mean_range_sq += s.range * s.range;
  }
  centroid /= static_cast<double>(n);
  mean_sq /= static_cast<double>(n);
  mean_range_sq /= static_cast<double>(n);

  Eigen::Matrix2d scatter = Eigen::Matrix2d::Zero();
  for (const RangeSample& s : samples) {
    const Vec2 d = s.anchor - centroid;
    scatter += d * d.transpose();
  }
  scatter /= static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> axes(scatter, Eigen::EigenvaluesOnly);
  const double major = 2.0 * std::sqrt(std::max(axes.eigenvalues()(1), 0.0));
  const double minor = 2.0 * std::sqrt(std::max(axes.eigenvalues()(0), 0.0));
  if (major <= options.min_baseline || minor <= options.min_cross_baseline) {
    return std::nullopt;
  }

  // Differencing |p - a_k|^2 = d_k^2 against the mean removes |p|^2.
  Eigen::MatrixXd M(static_cast<Eigen::Index>(n), 2);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const Eigen::Index i = static_cast<Eigen::Index>(k);
    M.row(i) = 2.0 * (samples[k].anchor - centroid).transpose();
    rhs(i) = samples[k].anchor.squaredNorm() - mean_sq -
             (samples[k].range * samples[k].range - mean_range_sq);
  }
  const Eigen::Matrix2d A = M.transpose() * M;
  const auto condition = [](const Eigen::Matrix2d& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(m, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues()(0);
    return lo > 0.0 ? eig.eigenvalues()(1) / lo : INFINITY;
  };
  if (condition(A) > options.max_condition) return std::nullopt;
  Vec2 p = A.ldlt().solve(M.transpose() * rhs);

  Eigen::Matrix2d JtJ = Eigen::Matrix2d::Zero();
  for (int it = 0; it < options.iterations; ++it) {
    JtJ.setZero();
    Vec2 Jtr = Vec2::Zero();
    for (const RangeSample& s : samples) {
      const Vec2 diff = p - s.anchor;
      const double dist = diff.norm();
      if (dist < kMinRange) continue;
      const Vec2 j = diff / dist;
      JtJ += j * j.transpose();
      Jtr += j * (dist - s.range);
    }
    if (condition(JtJ) > options.max_condition) return std::nullopt;
    const Vec2 delta = -JtJ.ldlt().solve(Jtr);
    p += delta;
    if (delta.norm() < 1e-12) break;
  }
  JtJ.setZero();
  double sq = 0.0;
  Eigen::Matrix2d anchor_cov = Eigen::Matrix2d::Zero();
  for (const RangeSample& s : samples) {
    const Vec2 diff = p - s.anchor;
    const double dist = diff.norm();
    anchor_cov += s.anchor_covariance;
    sq += (dist - s.range) * (dist - s.range);
    if (dist < kMinRange) continue;
    JtJ += (diff / dist) * (diff / dist).transpose();
  }
  if (condition(JtJ) > options.max_condition) return std::nullopt;
  if (std::sqrt(sq / static_cast<double>(n)) > options.max_residual_sigmas * sigma) {
    return std::nullopt;
  }

  TrilaterationResult out;
  out.position = p;
  out.covariance = options.covariance_inflation * sigma * sigma * JtJ.inverse() +
                   anchor_cov / static_cast<double>(n);
  return out;
}

EkfState landmark_init(const EkfState& state, int landmark_index,
                       const std::vector<RangeSample>& samples, double sigma,
                       const TrilaterationOptions& options, bool* initialized) {
  if (initialized) *initialized = false;
  if (landmark_index < 0 ||
      landmark_index >= static_cast<int>(state.landmark_slot.size())) {
    throw std::out_of_range("unknown landmark " + std::to_string(landmark_index));
  }
  if (state.has_landmark(landmark_index)) return state;
  const std::optional<TrilaterationResult> fix = trilaterate(samples, sigma, options);
  if (!fix) return state;

  EkfState out = state;
  const int old_dim = state.dim();
  out.landmark_slot[static_cast<std::size_t>(landmark_index)] =
      static_cast<int>(out.landmarks.size());
  out.landmarks.push_back(fix->position);
  out.covariance = Eigen::MatrixXd::Zero(old_dim + 2, old_dim + 2);
  out.covariance.topLeftCorner(old_dim, old_dim) = state.covariance;
  out.covariance.block<2, 2>(old_dim, old_dim) = fix->covariance;
  if (initialized) *initialized = true;
  return out;
}

}  // namespace formation

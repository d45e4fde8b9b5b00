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

#include "formation/optimizer.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "formation/assignment.hpp"
#include "formation/costs.hpp"
#include "formation/parallel.hpp"
#include "gtest/gtest.h"

namespace formation {
namespace {

// Squared distance of robot 2 from a fixed point; smooth and convex in position.
double bowl(const FormationState& x) {
  return (x.pose(2).r() - Vec2(1.0, -2.0)).squaredNorm() + 0.5 * x.pose(2).angle() * x.pose(2).angle();
}

TEST(OptimizerTest, GradientMatchesAnalyticForm) {
  const FormationState x({Pose2::FromAngle(0.3, Vec2(0.5, 0.5))});
  const Eigen::VectorXd g = gradient_fd(bowl, x, 1e-6);
  // d/d(phi) of 0.5 phi^2 is phi; translation gradient is C^T 2 (r - p).
  const Vec2 gt = x.pose(2).C().transpose() * (2.0 * (x.pose(2).r() - Vec2(1.0, -2.0)));
  EXPECT_NEAR(g(0), 0.3, 1e-6);
  EXPECT_NEAR(g(1), gt.x(), 1e-6);
  EXPECT_NEAR(g(2), gt.y(), 1e-6);
}

TEST(OptimizerTest, ConvergesOnBowl) {
  const FormationState x0({Pose2::FromAngle(1.0, Vec2(-2.0, 3.0))});
  OptimizerConfig cfg;
  cfg.alpha = 0.01;
  const OptimizationTrace t = minimize(bowl, x0, cfg);
  EXPECT_TRUE(t.converged);
  EXPECT_LT((t.final_state.pose(2).r() - Vec2(1.0, -2.0)).norm(), 1e-2);
  EXPECT_LT(t.final_cost, 1e-4);
  EXPECT_LT(t.iterates.back().step_norm, cfg.tol);
}

TEST(OptimizerTest, ReportsNonConvergence) {
  const FormationState x0({Pose2::FromAngle(0.0, Vec2(5.0, 5.0))});
  OptimizerConfig cfg;
  cfg.max_iters = 3;
  const OptimizationTrace t = minimize(bowl, x0, cfg);
  EXPECT_FALSE(t.converged);
  EXPECT_EQ(t.iterates.size(), 3u);
  EXPECT_FALSE(t.diagnostic.empty());
}

TEST(OptimizerTest, SaturatedPlateauIsReported) {
  const FormationState x0({Pose2::FromAngle(0.0, Vec2(0.1, 0.0))});
  const CostFunction flat = [](const FormationState&) { return kSaturatedCost; };
  const OptimizationTrace t = minimize(flat, x0, OptimizerConfig{});
  EXPECT_FALSE(t.converged);
  EXPECT_NE(t.diagnostic.find("saturated"), std::string::npos);
}

TEST(OptimizerTest, NonFiniteCostNamesCoordinate) {
  const FormationState x0({Pose2::FromAngle(0.0, Vec2(1.0, 0.0))});
  const CostFunction bad = [](const FormationState& x) {
    return x.pose(2).r().y() > 0.0 ? std::numeric_limits<double>::quiet_NaN() : 0.0;
  };
  try {
    gradient_fd(bad, x0, 1e-6);
    FAIL() << "expected NonFiniteCostError";
  } catch (const NonFiniteCostError& e) {
    EXPECT_EQ(e.coordinate(), 2);
  }
}

TEST(OptimizerTest, ConfigValidation) {
  OptimizerConfig cfg;
  cfg.beta = 1.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.alpha = 0.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(OptimizerTest, AdjacencyDescentYieldsCollinearFormation) {
  const TeamConfig team = TeamConfig::Uniform(5);
  const FormationSpec spec = FormationSpec::Line(5);
  MultiStartConfig ms;
  ms.restarts = 2;
  ms.seed = 3;
  const MultiStartResult r = multi_start(
      [&](const FormationState& x0) -> CostFunction {
        const SortedIds s = sort_robot_ids(x0, team, spec.directions);
        return [spec, s](const FormationState& x) { return j_adj(x, spec, s); };
      },
      5, OptimizerConfig{}, ms);
  EXPECT_TRUE(r.best.converged);
  EXPECT_LT(r.best.final_cost, 1e-3);
  for (RobotId id = 2; id <= 5; ++id) {
    EXPECT_LT(std::abs(r.best.final_state.pose(id).r().y()), 0.05);
  }
}

TEST(OptimizerTest, MultiStartIsDeterministicAcrossJobs) {
  const TeamConfig team = TeamConfig::Uniform(3);
  const FormationSpec spec = FormationSpec::Line(3);
  const auto make = [&](const FormationState& x0) -> CostFunction {
    const SortedIds s = sort_robot_ids(x0, team, spec.directions);
    return [spec, s](const FormationState& x) { return j_adj(x, spec, s); };
  };
  MultiStartConfig ms;
  ms.restarts = 4;
  ms.seed = 99;
  const MultiStartResult serial = multi_start(make, 3, OptimizerConfig{}, ms);
  ms.jobs = 3;
  const MultiStartResult threaded = multi_start(make, 3, OptimizerConfig{}, ms);
  EXPECT_EQ(serial.final_costs, threaded.final_costs);
  EXPECT_EQ(serial.best_restart, threaded.best_restart);
}

TEST(OptimizerTest, RandomFormationRespectsBox) {
  std::mt19937_64 rng(1);
  InitBox box;
  box.half_width = 2.0;
  box.min_separation = 0.6;
  for (int k = 0; k < 50; ++k) {
    const FormationState x = random_formation(5, box, rng);
    for (RobotId a = 1; a <= 5; ++a) {
      for (RobotId b = a + 1; b <= 5; ++b) {
        EXPECT_GT(relative_position(x, a, b).norm(), 0.6);
      }
    }
    for (const Pose2& p : x.poses()) EXPECT_LE(p.r().cwiseAbs().maxCoeff(), 2.0);
  }
}

TEST(OptimizerTest, DerivedSeedsDiffer) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  EXPECT_EQ(derive_seed(7, 3), derive_seed(7, 3));
}

TEST(ParallelTest, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(8, 4, [](int i) {
                 if (i == 5) throw std::runtime_error("boom");
               }),
               std::runtime_error);
  std::vector<int> hits(16, 0);
  parallel_for(16, 3, [&](int i) { hits[static_cast<std::size_t>(i)] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
}

}  // namespace
}  // namespace formation

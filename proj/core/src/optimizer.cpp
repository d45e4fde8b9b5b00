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
#include <numbers>
#include <sstream>

#include "formation/costs.hpp"
#include "formation/parallel.hpp"

namespace formation {

void OptimizerConfig::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!(beta >= 0.0 && beta < 1.0)) {
    throw std::invalid_argument("beta must lie in [0, 1)");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (!(fd_step > 0.0)) throw std::invalid_argument("fd_step must be positive");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
}

Eigen::VectorXd gradient_fd(const CostFunction& cost, const FormationState& x,
                            double step) {
  const int dof = x.dof();
  Eigen::VectorXd grad(dof);
  Eigen::VectorXd dx = Eigen::VectorXd::Zero(dof);
  for (int k = 0; k < dof; ++k) {
    dx(k) = step;
    const double plus = cost(oplus(x, dx));
    dx(k) = -step;
    const double minus = cost(oplus(x, dx));
    dx(k) = 0.0;
    if (!std::isfinite(plus) || !std::isfinite(minus)) {
      throw NonFiniteCostError(
          "non-finite cost probing coordinate " + std::to_string(k), k);
    }
    grad(k) = (plus - minus) / (2.0 * step);
  }
  return grad;
}

OptimizationTrace minimize(const CostFunction& cost, const FormationState& x0,
                           const OptimizerConfig& cfg) {
  cfg.validate();
  OptimizationTrace trace;
  FormationState x = x0;
  double value = cost(x);
  if (!std::isfinite(value)) {
    throw NonFiniteCostError("cost is not finite at the initial state", -1);
  }
  Eigen::VectorXd step = Eigen::VectorXd::Zero(x.dof());
  for (int t = 1; t <= cfg.max_iters; ++t) {
    const Eigen::VectorXd grad = gradient_fd(cost, x, cfg.fd_step);
    if (t == 1 && value >= kSaturatedCost && grad.squaredNorm() == 0.0) {
      trace.final_state = x;
      trace.final_cost = value;
      trace.diagnostic = "initial state lies on a saturated cost plateau";
      return trace;
    }
    step = cfg.beta * step - cfg.alpha * grad;
    x = oplus(x, step);
    value = cost(x);
    const double norm = step.norm();
    trace.iterates.push_back({t, value, norm});
    if (norm < cfg.tol) {
      trace.converged = true;
      break;
    }
  }
  trace.final_state = std::move(x);
  trace.final_cost = value;
  if (!trace.converged) {
    std::ostringstream msg;
    msg << "no convergence after " << cfg.max_iters << " iterations";
    trace.diagnostic = msg.str();
  }
  return trace;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  // splitmix64 finalizer over a stream-offset counter.
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

FormationState random_formation(int robot_count, const InitBox& box,
                                 std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(-box.half_width, box.half_width);
  std::uniform_real_distribution<double> heading(-std::numbers::pi,
                                                 std::numbers::pi);
  for (;;) {
    std::vector<Pose2> poses;
    for (int p = 2; p <= robot_count; ++p) {
      const double x = pos(rng);
      const double y = pos(rng);
      poses.push_back(Pose2::FromAngle(heading(rng), Vec2(x, y)));
    }
    FormationState state(std::move(poses));
    bool separated = true;
    for (RobotId a = 1; a <= robot_count && separated; ++a) {
      for (RobotId b = a + 1; b <= robot_count; ++b) {
        if (relative_position(state, a, b).norm() <= box.min_separation) {
          separated = false;
          break;
        }
      }
    }
    if (separated) return state;
  }
}

MultiStartResult multi_start(
    const std::function<CostFunction(const FormationState&)>& make_cost,
    int robot_count, const OptimizerConfig& cfg, const MultiStartConfig& ms) {
  if (ms.restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  std::vector<OptimizationTrace> traces(static_cast<std::size_t>(ms.restarts));
  std::vector<FormationState> starts(traces.size());
  for (int k = 0; k < ms.restarts; ++k) {
    std::mt19937_64 rng(derive_seed(ms.seed, static_cast<std::uint64_t>(k)));
    starts[static_cast<std::size_t>(k)] = random_formation(robot_count, ms.box, rng);
  }
  parallel_for(ms.restarts, ms.jobs, [&](int k) {
    const auto idx = static_cast<std::size_t>(k);
    traces[idx] = minimize(make_cost(starts[idx]), starts[idx], cfg);
  });

  MultiStartResult result;
  int best = -1;
  for (int k = 0; k < ms.restarts; ++k) {
    const OptimizationTrace& t = traces[static_cast<std::size_t>(k)];
    result.final_costs.push_back(t.final_cost);
    if (best < 0) {
      best = k;
      continue;
    }
    const OptimizationTrace& b = traces[static_cast<std::size_t>(best)];
    if ((t.converged && !b.converged) ||
        (t.converged == b.converged && t.final_cost < b.final_cost)) {
      best = k;
    }
  }
  result.best_restart = best;
  result.best = std::move(traces[static_cast<std::size_t>(best)]);
  result.best_x0 = starts[static_cast<std::size_t>(best)];
  return result;
}

}  // namespace formation

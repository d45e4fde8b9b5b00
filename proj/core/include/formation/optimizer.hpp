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

#ifndef FORMATION_OPTIMIZER_HPP_
#define FORMATION_OPTIMIZER_HPP_

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "formation/se2.hpp"

namespace formation {

using CostFunction = std::function<double(const FormationState&)>;

class NonFiniteCostError : public std::runtime_error {
 public:
  NonFiniteCostError(const std::string& what, int coordinate)
      : std::runtime_error(what), coordinate_(coordinate) {}
  int coordinate() const { return coordinate_; }

 private:
  int coordinate_;
};

struct OptimizerConfig {
  double alpha = 0.001;  // learning rate
  double beta = 0.9;     // momentum
  double tol = 1e-4;     // stop once |dx_t| < tol
  int max_iters = 50000;
  double fd_step = 1e-6;

  void validate() const;
};

struct TraceEntry {
  int iteration = 0;
  double cost = 0.0;
  double step_norm = 0.0;
};

struct OptimizationTrace {
  std::vector<TraceEntry> iterates;
  FormationState final_state;
  double final_cost = 0.0;
  bool converged = false;
  std::string diagnostic;
};

/// Central differences of `cost` along each (+) basis direction.
Eigen::VectorXd gradient_fd(const CostFunction& cost, const FormationState& x,
                            double step);

/// Heavy-ball descent on SE(2)^{N-1}:
///   dx_t = beta * dx_{t-1} - alpha * grad J(x_t),   x_{t+1} = x_t (+) dx_t,
/// with dx_0 = 0, stopping when |dx_t| < tol or after max_iters steps.
OptimizationTrace minimize(const CostFunction& cost, const FormationState& x0,
                           const OptimizerConfig& cfg);

struct InitBox {
  double half_width = 3.0;       // translations uniform in [-w, w]^2
  double min_separation = 0.5;   // resample while any pair is closer
};

/// Random state for `robot_count` robots; headings uniform in (-pi, pi].
FormationState random_formation(int robot_count, const InitBox& box,
                                std::mt19937_64& rng);

// Independent per-restart seed derived from a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

struct MultiStartConfig {
  int restarts = 8;
  InitBox box;
  std::uint64_t seed = 1;
  int jobs = 1;
};

struct MultiStartResult {
  OptimizationTrace best;
  FormationState best_x0;
  int best_restart = 0;
  std::vector<double> final_costs;
};

/// Runs `restarts` independent minimizations from random starts and keeps
/// the lowest final cost, preferring converged runs. `make_cost` builds the
/// objective for one start (it may depend on the start, e.g. through the
/// sorted robot ids).
MultiStartResult multi_start(
    const std::function<CostFunction(const FormationState&)>& make_cost,
    int robot_count, const OptimizerConfig& cfg, const MultiStartConfig& ms);

}  // namespace formation

#endif  // FORMATION_OPTIMIZER_HPP_

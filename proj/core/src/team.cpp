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

#include "formation/team.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace formation {

std::vector<Vec2> default_tag_offsets() {
  return {Vec2(0.17, -0.17), Vec2(-0.17, 0.17)};
}

TeamConfig::TeamConfig(std::vector<RobotSpec> robots, std::vector<Vec2> landmarks)
    : robots_(std::move(robots)), landmarks_(std::move(landmarks)) {
  if (robots_.empty()) {
    throw std::invalid_argument("team must contain at least one robot");
  }
  for (std::size_t k = 0; k < robots_.size(); ++k) {
    const RobotSpec& spec = robots_[k];
    if (spec.id != static_cast<RobotId>(k + 1)) {
      throw std::invalid_argument("robot ids must be consecutive from 1; got " +
                                  std::to_string(spec.id) + " at position " +
                                  std::to_string(k + 1));
    }
    if (!(spec.camera_radius > 0.0)) {
      throw std::invalid_argument("robot " + std::to_string(spec.id) +
                                  ": camera radius must be positive");
    }
    if (spec.tag_offsets.empty()) {
      throw std::invalid_argument("robot " + std::to_string(spec.id) +
                                  ": at least one tag required");
    }
    for (std::size_t a = 0; a < spec.tag_offsets.size(); ++a) {
      if (!spec.tag_offsets[a].allFinite()) {
        throw std::invalid_argument("robot " + std::to_string(spec.id) +
                                    ": non-finite tag offset");
      }
      for (std::size_t b = a + 1; b < spec.tag_offsets.size(); ++b) {
        if ((spec.tag_offsets[a] - spec.tag_offsets[b]).norm() < 1e-12) {
          throw std::invalid_argument("robot " + std::to_string(spec.id) +
                                      ": duplicate tag offsets");
        }
      }
      tags_.push_back({spec.id, static_cast<int>(a)});
    }
  }
  robot_tag_count_ = static_cast<int>(tags_.size());
  for (std::size_t l = 0; l < landmarks_.size(); ++l) {
    tags_.push_back({0, static_cast<int>(l)});
  }
}

TeamConfig TeamConfig::Uniform(int n, double camera_radius,
                               std::vector<Vec2> tag_offsets) {
  std::vector<RobotSpec> robots;
  for (int id = 1; id <= n; ++id) {
    robots.push_back({id, tag_offsets, camera_radius});
  }
  return TeamConfig(std::move(robots));
}

const RobotSpec& TeamConfig::robot(RobotId id) const {
  if (id < 1 || id > robot_count()) {
    throw std::out_of_range("unknown robot id " + std::to_string(id));
  }
  return robots_[static_cast<std::size_t>(id - 1)];
}

const TagLocation& TeamConfig::tag(TagId id) const {
  if (id < 1 || id > tag_count()) {
    throw std::out_of_range("unknown tag id " + std::to_string(id));
  }
  return tags_[static_cast<std::size_t>(id - 1)];
}

std::vector<TagId> TeamConfig::tags_of(RobotId id) const {
  robot(id);
  std::vector<TagId> out;
  for (int t = 0; t < robot_tag_count_; ++t) {
    if (tags_[static_cast<std::size_t>(t)].robot == id) out.push_back(t + 1);
  }
  return out;
}

TagId TeamConfig::landmark_tag(int landmark_index) const {
  if (landmark_index < 0 || landmark_index >= static_cast<int>(landmarks_.size())) {
    throw std::out_of_range("unknown landmark " + std::to_string(landmark_index));
  }
  return robot_tag_count_ + landmark_index + 1;
}

std::vector<double> TeamConfig::camera_radii() const {
  std::vector<double> radii;
  for (const auto& r : robots_) radii.push_back(r.camera_radius);
  return radii;
}

void RangeGraph::add(const TeamConfig& team, Edge e, double sigma) {
  if (e.i == e.j) {
    throw std::invalid_argument("self edge on tag " + std::to_string(e.i));
  }
  const TagLocation& a = team.tag(e.i);
  const TagLocation& b = team.tag(e.j);
  if (!a.is_landmark() && a.robot == b.robot) {
    throw std::invalid_argument("edge (" + std::to_string(e.i) + ", " +
                                std::to_string(e.j) + ") joins tags on robot " +
                                std::to_string(a.robot));
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("edge sigma must be positive");
  }
  sigma_[e] = sigma;
}

double RangeGraph::sigma(Edge e) const {
  auto it = sigma_.find(e);
  if (it == sigma_.end()) {
    throw std::out_of_range("edge not in graph");
  }
  return it->second;
}

std::vector<Edge> RangeGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(sigma_.size());
  for (const auto& [e, s] : sigma_) out.push_back(e);
  return out;
}

RangeGraph RangeGraph::scaled(double factor) const {
  RangeGraph out = *this;
  for (auto& [e, s] : out.sigma_) s *= factor;
  return out;
}

RangeGraph default_full_graph(const TeamConfig& team, double sigma) {
  RangeGraph g;
  for (TagId i = 1; i <= team.robot_tag_count(); ++i) {
    for (TagId j = i + 1; j <= team.robot_tag_count(); ++j) {
      if (team.tag(i).robot != team.tag(j).robot) g.add(team, Edge(i, j), sigma);
    }
  }
  return g;
}

RangeGraph mask_edges(const RangeGraph& graph, std::pair<RobotId, RobotId> pair,
                      const TeamConfig& team) {
  team.robot(pair.first);
  team.robot(pair.second);
  RangeGraph out = graph;
  for (const Edge& e : graph.edges()) {
    const RobotId a = team.tag(e.i).robot;
    const RobotId b = team.tag(e.j).robot;
    if ((a == pair.first && b == pair.second) ||
        (a == pair.second && b == pair.first)) {
      out.erase(e);
    }
  }
  return out;
}

Vec2 unit_direction(const Vec2& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::invalid_argument("direction vector must be non-zero");
  }
  return v / n;
}

void FormationSpec::validate(int robot_count) const {
  if (static_cast<int>(directions.size()) != robot_count - 1) {
    throw std::invalid_argument("expected " + std::to_string(robot_count - 1) +
                                " directions, got " +
                                std::to_string(directions.size()));
  }
  for (std::size_t k = 0; k < directions.size(); ++k) {
    if (std::abs(directions[k].norm() - 1.0) > 1e-9) {
      throw std::invalid_argument("direction " + std::to_string(k + 1) +
                                  " is not unit length");
    }
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("lambda must lie in [0, 1]");
  }
  if (!(collision_radius > 0.0 && collision_radius < activation_radius)) {
    throw std::invalid_argument("radii must satisfy 0 < d < A");
  }
  for (int slot : overlap_exempt) {
    if (slot < 1 || slot > robot_count) {
      throw std::invalid_argument("overlap exemption slot " +
                                  std::to_string(slot) + " out of range");
    }
  }
  for (double w : {weights.adj, weights.overlap, weights.est, weights.col}) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("cost weights must be non-negative");
    }
  }
}

FormationSpec FormationSpec::Line(int robot_count, double lambda) {
  FormationSpec spec;
  spec.directions.assign(static_cast<std::size_t>(robot_count - 1), Vec2(1.0, 0.0));
  spec.lambda = lambda;
  return spec;
}

SortedIds SortedIds::Identity(const TeamConfig& team) {
  SortedIds s;
  for (const auto& r : team.robots()) {
    s.order.push_back(r.id);
    s.radii.push_back(r.camera_radius);
  }
  return s;
}

void SortedIds::validate(int robot_count) const {
  if (static_cast<int>(order.size()) != robot_count ||
      radii.size() != order.size()) {
    throw std::invalid_argument("sorted ids must cover every robot");
  }
  if (order.front() != 1) {
    throw std::invalid_argument("sorted ids must start with the reference robot");
  }
  std::vector<RobotId> seen = order;
  std::sort(seen.begin(), seen.end());
  for (int k = 0; k < robot_count; ++k) {
    if (seen[static_cast<std::size_t>(k)] != k + 1) {
      throw std::invalid_argument("sorted ids are not a permutation");
    }
  }
}

}  // namespace formation

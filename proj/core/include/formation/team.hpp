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

#ifndef FORMATION_TEAM_HPP_
#define FORMATION_TEAM_HPP_

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "formation/se2.hpp"

namespace formation {

// Global tag identifier, 1-based. Robot tags come first (robot 1's tags,
// then robot 2's, ...), followed by one tag per static landmark.
using TagId = int;

inline constexpr double kDefaultRangeSigma = 0.1;
inline constexpr double kDefaultCameraRadius = 0.5;
inline constexpr double kExperimentCameraRadius = 0.7;
inline constexpr double kDefaultActivationRadius = 0.9;
inline constexpr double kDefaultCollisionRadius = 0.5;

struct RobotSpec {
  RobotId id = 1;
  std::vector<Vec2> tag_offsets;  // body frame, meters
  double camera_radius = kDefaultCameraRadius;
};

// Two tags at (0.17, -0.17) and (-0.17, 0.17) m.
std::vector<Vec2> default_tag_offsets();

struct TagLocation {
  RobotId robot = 0;       // 0 for a landmark tag
  int local_index = 0;     // tag index on the robot, or landmark index
  bool is_landmark() const { return robot == 0; }
};

class TeamConfig {
 public:
  TeamConfig() = default;
  // Validates robot ids are 1..N and tags are well formed. Landmarks are
  // static points resolved in Robot 1's frame.
  explicit TeamConfig(std::vector<RobotSpec> robots,
                      std::vector<Vec2> landmarks = {});

  // N identical robots with the default tag geometry.
  static TeamConfig Uniform(int n, double camera_radius = kDefaultCameraRadius,
                            std::vector<Vec2> tag_offsets = default_tag_offsets());

  int robot_count() const { return static_cast<int>(robots_.size()); }
  int tag_count() const { return static_cast<int>(tags_.size()); }
  int robot_tag_count() const { return robot_tag_count_; }

  const std::vector<RobotSpec>& robots() const { return robots_; }
  const RobotSpec& robot(RobotId id) const;
  const std::vector<Vec2>& landmarks() const { return landmarks_; }

  const TagLocation& tag(TagId id) const;
  // Tags carried by one robot, in local order.
  std::vector<TagId> tags_of(RobotId id) const;
  TagId landmark_tag(int landmark_index) const;

  std::vector<double> camera_radii() const;

 private:
  std::vector<RobotSpec> robots_;
  std::vector<Vec2> landmarks_;
  std::vector<TagLocation> tags_;
  int robot_tag_count_ = 0;
};

/// Range edge between two tags, stored with i < j.
struct Edge {
  TagId i = 0;
  TagId j = 0;
  Edge() = default;
  Edge(TagId a, TagId b) : i(std::min(a, b)), j(std::max(a, b)) {}
  auto operator<=>(const Edge&) const = default;
};

/// Measurement graph. Iteration order is lexicographic in (min id, max id).
class RangeGraph {
 public:
  RangeGraph() = default;

  // Throws for self edges, same-robot edges or non-positive sigma.
  void add(const TeamConfig& team, Edge e, double sigma = kDefaultRangeSigma);
  void erase(Edge e) { sigma_.erase(e); }

  std::size_t size() const { return sigma_.size(); }
  bool empty() const { return sigma_.empty(); }
  bool contains(Edge e) const { return sigma_.count(e) != 0; }
  double sigma(Edge e) const;

  std::vector<Edge> edges() const;
  const std::map<Edge, double>& entries() const { return sigma_; }

  // Multiplies every sigma by `factor`.
  RangeGraph scaled(double factor) const;

  bool operator==(const RangeGraph&) const = default;

 private:
  std::map<Edge, double> sigma_;
};

// Every cross-robot tag pair. Landmark tags are not included.
RangeGraph default_full_graph(const TeamConfig& team,
                              double sigma = kDefaultRangeSigma);

// Removes all edges joining the two given robots.
RangeGraph mask_edges(const RangeGraph& graph, std::pair<RobotId, RobotId> pair,
                      const TeamConfig& team);

struct CostWeights {
  double adj = 1.0;
  double overlap = 1.0;
  double est = 1.0;
  double col = 1.0;
};

/// User-defined formation shape and cost parameters.
struct FormationSpec {
  std::vector<Vec2> directions;  // n^(k), k = 1..N-1, unit length
  double lambda = 0.25;
  // Sorted slot positions (1-based) whose overlap terms are forced to zero.
  std::set<int> overlap_exempt;
  double activation_radius = kDefaultActivationRadius;
  double collision_radius = kDefaultCollisionRadius;
  CostWeights weights;

  // Throws std::invalid_argument when an invariant is violated.
  void validate(int robot_count) const;

  // All directions equal to +x.
  static FormationSpec Line(int robot_count, double lambda = 0.25);
};

// Normalizes a direction, rejecting zero vectors.
Vec2 unit_direction(const Vec2& v);

/// Robot ids in sorted slot order plus their radii. order[0] is always 1.
struct SortedIds {
  std::vector<RobotId> order;
  std::vector<double> radii;

  static SortedIds Identity(const TeamConfig& team);
  void validate(int robot_count) const;
  int size() const { return static_cast<int>(order.size()); }
};

}  // namespace formation

#endif  // FORMATION_TEAM_HPP_

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

#include "formation/cli/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace formation::cli {
namespace {

using json = nlohmann::json;

// Read-only view of one JSON object with its dotted path, used to report
// which field is wrong.
class Node {
 public:
  Node(const json& value, std::string path) : value_(value), path_(std::move(path)) {
    if (!value_.is_object()) fail("expected an object");
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ConfigError(path_, message);
  }
  std::string path_of(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) const { return value_.contains(key); }
  const json& raw(const std::string& key) const { return value_.at(key); }

  Node child(const std::string& key) const { return Node(value_.at(key), path_of(key)); }

  double number(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number()) throw ConfigError(path_of(key), "expected a number");
    return v.get<double>();
  }
  int integer(const std::string& key, int fallback) const {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number_integer()) throw ConfigError(path_of(key), "expected an integer");
    return v.get<int>();
  }
  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() &&
                                   v.get<std::int64_t>() < 0)) {
      throw ConfigError(path_of(key), "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }
  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) throw ConfigError(path_of(key), "expected true or false");
    return v.get<bool>();
  }
  std::string string(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_string()) throw ConfigError(path_of(key), "expected a string");
    return v.get<std::string>();
  }
  const json& array(const std::string& key) const {
    const json& v = raw(key);
    if (!v.is_array()) throw ConfigError(path_of(key), "expected an array");
    return v;
  }

  void allow_only(std::initializer_list<const char*> keys) const {
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, v] : value_.items()) {
      if (allowed.count(k) == 0) throw ConfigError(path_of(k), "unknown field");
    }
  }

 private:
  const json& value_;
  std::string path_;
};

std::string indexed(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

Vec2 parse_vec2(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError(path, "expected [x, y]");
  }
  return Vec2(v[0].get<double>(), v[1].get<double>());
}

std::vector<Vec2> parse_vec2_list(const Node& node, const std::string& key) {
  std::vector<Vec2> out;
  const json& arr = node.array(key);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(parse_vec2(arr[i], indexed(node.path_of(key), i)));
  }
  return out;
}

std::pair<int, int> parse_pair(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() ||
      !v[1].is_number_integer()) {
    throw ConfigError(path, "expected a pair of integers");
  }
  return {v[0].get<int>(), v[1].get<int>()};
}

TeamConfig parse_team(const Node& root) {
  if (root.has("robots") == root.has("robot_count")) {
    root.fail("exactly one of robots or robot_count is required");
  }
  const double default_radius = root.number("camera_radius", kDefaultCameraRadius);
  std::vector<RobotSpec> robots;
  if (root.has("robot_count")) {
    const int n = root.integer("robot_count", 0);
    if (n < 2) throw ConfigError(root.path_of("robot_count"), "need at least 2 robots");
    std::vector<Vec2> tags = default_tag_offsets();
    if (root.has("tag_offsets")) tags = parse_vec2_list(root, "tag_offsets");
    for (int id = 1; id <= n; ++id) robots.push_back({id, tags, default_radius});
  } else {
    const json& arr = root.array("robots");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const Node r(arr[i], indexed(root.path_of("robots"), i));
      r.allow_only({"id", "camera_radius", "tags"});
      RobotSpec spec;
      spec.id = r.integer("id", static_cast<int>(i) + 1);
      if (spec.id != static_cast<int>(i) + 1) {
        throw ConfigError(r.path_of("id"), "robot ids must be 1..N in order");
      }
      spec.camera_radius = r.number("camera_radius", default_radius);
      spec.tag_offsets = r.has("tags") ? parse_vec2_list(r, "tags") : default_tag_offsets();
      robots.push_back(std::move(spec));
    }
  }
  try {
    return TeamConfig(std::move(robots));
  } catch (const std::exception& e) {
    throw ConfigError(root.has("robots") ? root.path_of("robots") : root.path_of("robot_count"),
                      e.what());
  }
}

void parse_graph(const Node& root, Scenario& s) {
  const int n = s.team.robot_count();
  if (!root.has("graph")) {
    s.graph = default_full_graph(s.team);
    return;
  }
  const Node g = root.child("graph");
  g.allow_only({"full", "sigma", "edges", "masks", "mask_slots"});
  const double sigma = g.number("sigma", kDefaultRangeSigma);
  if (!(sigma > 0.0)) throw ConfigError(g.path_of("sigma"), "must be positive");
  const bool full = g.boolean("full", !g.has("edges"));
  if (full) s.graph = default_full_graph(s.team, sigma);
  if (g.has("edges")) {
    const json& arr = g.array("edges");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const Node e(arr[i], indexed(g.path_of("edges"), i));
      e.allow_only({"i", "j", "sigma"});
      const int a = e.integer("i", 0);
      const int b = e.integer("j", 0);
      if (a < 1 || b < 1 || a > s.team.tag_count() || b > s.team.tag_count()) {
        e.fail("tag id out of range");
      }
      try {
        Edge edge(a, b);
        s.graph.erase(edge);
        s.graph.add(s.team, edge, e.number("sigma", sigma));
      } catch (const std::invalid_argument& ex) {
        e.fail(ex.what());
      }
    }
  }
  if (g.has("masks")) {
    const json& arr = g.array("masks");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = indexed(g.path_of("masks"), i);
      const auto [a, b] = parse_pair(arr[i], path);
      if (a < 1 || b < 1 || a > n || b > n || a == b) {
        throw ConfigError(path, "mask must name two distinct existing robots");
      }
      s.graph = mask_edges(s.graph, {a, b}, s.team);
    }
  }
  if (g.has("mask_slots")) {
    const json& arr = g.array("mask_slots");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = indexed(g.path_of("mask_slots"), i);
      const auto [a, b] = parse_pair(arr[i], path);
      if (a < 1 || b < 1 || a > n || b > n || a == b) {
        throw ConfigError(path, "slot mask must name two distinct slots in 1..N");
      }
      s.slot_masks.emplace_back(a, b);
    }
  }
}

void parse_formation(const Node& root, Scenario& s) {
  const int n = s.team.robot_count();
  FormationSpec spec = FormationSpec::Line(n);
  if (root.has("formation")) {
    const Node f = root.child("formation");
    f.allow_only({"directions", "direction", "lambda", "exemptions", "weights", "A", "d"});
    if (f.has("directions") && f.has("direction")) {
      f.fail("use either directions or direction");
    }
    if (f.has("directions")) {
      spec.directions.clear();
      const json& arr = f.array("directions");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string path = indexed(f.path_of("directions"), i);
        try {
          spec.directions.push_back(unit_direction(parse_vec2(arr[i], path)));
        } catch (const std::invalid_argument& e) {
          throw ConfigError(path, e.what());
        }
      }
      if (static_cast<int>(spec.directions.size()) != n - 1) {
        throw ConfigError(f.path_of("directions"),
                          "expected " + std::to_string(n - 1) + " directions, got " +
                              std::to_string(spec.directions.size()));
      }
    } else if (f.has("direction")) {
      try {
        const Vec2 d = unit_direction(parse_vec2(f.raw("direction"), f.path_of("direction")));
        spec.directions.assign(static_cast<std::size_t>(n - 1), d);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(f.path_of("direction"), e.what());
      }
    }
    spec.lambda = f.number("lambda", spec.lambda);
    spec.activation_radius = f.number("A", spec.activation_radius);
    spec.collision_radius = f.number("d", spec.collision_radius);
    if (f.has("exemptions")) {
      const json& arr = f.array("exemptions");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number_integer() || arr[i].get<int>() < 1 || arr[i].get<int>() > n) {
          throw ConfigError(indexed(f.path_of("exemptions"), i), "expected a slot in 1..N");
        }
        spec.overlap_exempt.insert(arr[i].get<int>());
      }
    }
    if (f.has("weights")) {
      const Node w = f.child("weights");
      w.allow_only({"adj", "overlap", "est", "col"});
      spec.weights.adj = w.number("adj", 1.0);
      spec.weights.overlap = w.number("overlap", 1.0);
      spec.weights.est = w.number("est", 1.0);
      spec.weights.col = w.number("col", 1.0);
    }
  }
  try {
    spec.validate(n);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(root.path_of("formation"), e.what());
  }
  s.formation = std::move(spec);
}

void parse_optimizer(const Node& root, Scenario& s) {
  if (!root.has("optimizer")) return;
  const Node o = root.child("optimizer");
  o.allow_only({"alpha", "beta", "tol", "max_iters", "fd_step", "restarts",
                "init_half_width", "init_min_separation"});
  OptimizerConfig& c = s.optimizer;
  c.alpha = o.number("alpha", c.alpha);
  c.beta = o.number("beta", c.beta);
  c.tol = o.number("tol", c.tol);
  c.max_iters = o.integer("max_iters", c.max_iters);
  c.fd_step = o.number("fd_step", c.fd_step);
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    o.fail(e.what());
  }
  s.multistart.restarts = o.integer("restarts", s.multistart.restarts);
  if (s.multistart.restarts < 1) throw ConfigError(o.path_of("restarts"), "must be >= 1");
  s.multistart.box.half_width = o.number("init_half_width", s.multistart.box.half_width);
  s.multistart.box.min_separation =
      o.number("init_min_separation", s.multistart.box.min_separation);
  if (!(s.multistart.box.half_width > 0.0) || s.multistart.box.min_separation < 0.0) {
    o.fail("initialization box must have positive width and non-negative separation");
  }
}

void parse_sim(const Node& root, Scenario& s) {
  if (!root.has("sim")) return;
  const Node n = root.child("sim");
  n.allow_only({"area", "dt", "range_rate", "gps_rate", "gps_sigma", "range_sigma",
                "sigma_omega", "sigma_v", "landmarks", "detection_radius",
                "waypoint_tolerance", "formation_gate", "gains", "init_sigma_heading",
                "init_sigma_position", "max_sim_time", "noise", "gps",
                "divergence_threshold", "trilateration"});
  SimConfig& c = s.sim;
  if (n.has("area")) {
    const Vec2 a = parse_vec2(n.raw("area"), n.path_of("area"));
    c.area = Area{a.x(), a.y()};
  }
  c.dt_truth = n.number("dt", c.dt_truth);
  c.range_rate = n.number("range_rate", c.range_rate);
  c.gps_rate = n.number("gps_rate", c.gps_rate);
  c.gps_sigma = n.number("gps_sigma", c.gps_sigma);
  c.range_sigma = n.number("range_sigma", c.range_sigma);
  c.vel_noise.sigma_omega = n.number("sigma_omega", c.vel_noise.sigma_omega);
  c.vel_noise.sigma_v = n.number("sigma_v", c.vel_noise.sigma_v);
  if (n.has("landmarks")) c.landmark_positions = parse_vec2_list(n, "landmarks");
  c.landmark_detection_radius = n.number("detection_radius", c.landmark_detection_radius);
  c.waypoint_tolerance = n.number("waypoint_tolerance", c.waypoint_tolerance);
  c.formation_gate = n.number("formation_gate", c.formation_gate);
  c.init_sigma_heading = n.number("init_sigma_heading", c.init_sigma_heading);
  c.init_sigma_position = n.number("init_sigma_position", c.init_sigma_position);
  c.max_sim_time = n.number("max_sim_time", c.max_sim_time);
  c.noise_enabled = n.boolean("noise", c.noise_enabled);
  c.gps_enabled = n.boolean("gps", c.gps_enabled);
  c.divergence_threshold = n.number("divergence_threshold", c.divergence_threshold);
  if (n.has("gains")) {
    const Node g = n.child("gains");
    g.allow_only({"waypoint", "formation", "heading", "speed_cap", "follower_speed_cap"});
    c.gains.k_waypoint = g.number("waypoint", c.gains.k_waypoint);
    c.gains.k_formation = g.number("formation", c.gains.k_formation);
    c.gains.k_heading = g.number("heading", c.gains.k_heading);
    c.gains.speed_cap = g.number("speed_cap", c.gains.speed_cap);
    c.gains.follower_speed_cap = g.number("follower_speed_cap", c.gains.follower_speed_cap);
    if (!(c.gains.k_waypoint > 0.0 && c.gains.k_formation > 0.0 && c.gains.k_heading > 0.0 &&
          c.gains.speed_cap > 0.0 && c.gains.follower_speed_cap > 0.0)) {
      g.fail("gains and speed caps must be positive");
    }
  }
  if (n.has("trilateration")) {
    const Node t = n.child("trilateration");
    t.allow_only({"min_samples", "min_baseline", "min_cross_baseline", "max_residual_sigmas",
                  "max_condition", "covariance_inflation", "iterations"});
    TrilaterationOptions& o = c.trilateration;
    const int samples = t.integer("min_samples", static_cast<int>(o.min_samples));
    if (samples < 3) throw ConfigError(t.path_of("min_samples"), "must be >= 3");
    o.min_samples = static_cast<std::size_t>(samples);
    o.min_baseline = t.number("min_baseline", o.min_baseline);
    o.min_cross_baseline = t.number("min_cross_baseline", o.min_cross_baseline);
    o.max_residual_sigmas = t.number("max_residual_sigmas", o.max_residual_sigmas);
    o.max_condition = t.number("max_condition", o.max_condition);
    o.covariance_inflation = t.number("covariance_inflation", o.covariance_inflation);
    o.iterations = t.integer("iterations", o.iterations);
  }
  if (!(c.vel_noise.sigma_omega >= 0.0 && c.vel_noise.sigma_v >= 0.0 &&
        c.init_sigma_heading > 0.0 && c.init_sigma_position > 0.0)) {
    n.fail("noise levels must be non-negative and prior sigmas positive");
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    n.fail(e.what());
  }
}

const std::map<std::string, std::string>& presets() {
  static const std::map<std::string, std::string> table = {
      {"sim5", R"({
  "name": "sim5",
  "seed": 1,
  "robot_count": 5,
  "camera_radius": 0.5,
  "graph": {"full": true, "sigma": 0.1},
  "formation": {"direction": [1, 0], "lambda": 0.25, "A": 0.9, "d": 0.5},
  "optimizer": {"alpha": 0.001, "beta": 0.9, "tol": 0.0001, "max_iters": 50000,
                "fd_step": 1e-6, "restarts": 8},
  "sim": {"area": [10, 24], "dt": 0.01, "range_rate": 110, "gps_rate": 50,
          "gps_sigma": 0.1, "range_sigma": 0.1, "sigma_omega": 0.01, "sigma_v": 0.1,
          "landmarks": [[2.5, 8.0], [7.5, 16.0]], "detection_radius": 2.0}
})"},
      {"bridge7", R"({
  "name": "bridge7",
  "seed": 1,
  "robot_count": 7,
  "camera_radius": 0.5,
  "graph": {"full": true, "sigma": 0.1, "mask_slots": [[1, 7]]},
  "formation": {"directions": [[1, 1], [1, 0], [1, 0], [1, 0], [1, 0], [1, -1]],
                "lambda": 0.25, "exemptions": [1, 7], "A": 0.9, "d": 0.5},
  "optimizer": {"restarts": 8}
})"},
      {"exp3plus2", R"({
  "name": "exp3plus2",
  "seed": 1,
  "robot_count": 5,
  "camera_radius": 0.7,
  "tag_offsets": [[0.17, -0.17], [-0.17, 0.17]],
  "graph": {"full": true, "sigma": 0.1},
  "formation": {"direction": [1, 0], "lambda": 0.25, "A": 0.9, "d": 0.5},
  "optimizer": {"restarts": 8},
  "sim": {"area": [4, 6], "dt": 0.1, "range_rate": 80, "gps_rate": 30,
          "landmarks": [[0.0, 2.0], [4.0, 4.0]], "detection_radius": 2.0}
})"},
  };
  return table;
}

void ensure_stream(const std::ios& stream, const std::string& path, const char* what) {
  if (!stream) throw ConfigError("", std::string("cannot ") + what + " " + path);
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  const Node root(doc, "");
  root.allow_only({"name", "seed", "robots", "robot_count", "camera_radius", "tag_offsets",
                   "graph", "formation", "optimizer", "sim"});
  Scenario s;
  s.name = root.string("name", s.name);
  s.team = parse_team(root);
  parse_graph(root, s);
  parse_formation(root, s);
  parse_optimizer(root, s);
  parse_sim(root, s);
  set_seed(s, root.unsigned_integer("seed", 1));
  return s;
}

Scenario load_scenario(const std::string& path) {
  return parse_scenario(read_text_file(path));
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, doc] : presets()) names.push_back(name);
  return names;
}

std::string preset_document(const std::string& name) {
  const auto it = presets().find(name);
  if (it == presets().end()) throw ConfigError("preset", "unknown preset '" + name + "'");
  return it->second;
}

Scenario load_preset(const std::string& name) {
  return parse_scenario(preset_document(name));
}

void set_seed(Scenario& scenario, std::uint64_t seed) {
  scenario.seed = seed;
  scenario.multistart.seed = seed;
  scenario.sim.seed = seed;
}

RangeGraph resolve_graph(const Scenario& scenario, const SortedIds& sorted) {
  RangeGraph g = scenario.graph;
  for (const auto& [a, b] : scenario.slot_masks) {
    g = mask_edges(g,
                   {sorted.order[static_cast<std::size_t>(a - 1)],
                    sorted.order[static_cast<std::size_t>(b - 1)]},
                   scenario.team);
  }
  return g;
}

std::vector<RobotId> slot_mask_robots(const Scenario& scenario, const SortedIds& sorted) {
  std::set<RobotId> ids;
  for (const auto& [a, b] : scenario.slot_masks) {
    ids.insert(sorted.order[static_cast<std::size_t>(a - 1)]);
    ids.insert(sorted.order[static_cast<std::size_t>(b - 1)]);
  }
  return {ids.begin(), ids.end()};
}

CostKind parse_cost_kind(const std::string& name) {
  if (name == "adj") return CostKind::kAdj;
  if (name == "opt") return CostKind::kOpt;
  if (name == "cov") return CostKind::kCov;
  throw ConfigError("cost", "expected adj, opt or cov, got '" + name + "'");
}

std::string cost_kind_name(CostKind kind) {
  switch (kind) {
    case CostKind::kAdj:
      return "adj";
    case CostKind::kOpt:
      return "opt";
    case CostKind::kCov:
      return "cov";
  }
  return "cov";
}

std::string formation_to_json(const FormationResult& r) {
  json doc;
  doc["id"] = r.id;
  doc["cost"] = r.cost;
  doc["scenario"] = r.scenario;
  doc["seed"] = r.seed;
  json robots = json::array();
  robots.push_back({{"id", 1}, {"x", 0.0}, {"y", 0.0}, {"theta", 0.0}});
  for (int k = 0; k < r.state.dof() / 3; ++k) {
    const Pose2& p = r.state.poses()[static_cast<std::size_t>(k)];
    // Rotation stored as (cos, sin) so the pose reloads bit for bit.
    robots.push_back({{"id", k + 2},
                      {"x", p.r().x()},
                      {"y", p.r().y()},
                      {"theta", p.angle()},
                      {"cos", p.C()(0, 0)},
                      {"sin", p.C()(1, 0)}});
  }
  doc["robots"] = robots;
  doc["sorted_ids"] = {{"order", r.sorted.order}, {"radii", r.sorted.radii}};
  doc["breakdown"] = {{"adj", r.breakdown.adj},
                      {"overlap", r.breakdown.overlap},
                      {"est", r.breakdown.est},
                      {"col", r.breakdown.col},
                      {"total", r.breakdown.total}};
  doc["trace"] = {{"converged", r.converged},
                  {"iterations", r.iterations},
                  {"diagnostic", r.diagnostic},
                  {"best_restart", r.best_restart},
                  {"restart_costs", r.restart_costs}};
  doc["gps_robots"] = r.gps_robots;
  return doc.dump(2) + "\n";
}

FormationResult formation_from_json(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed formation file: ") + e.what());
  }
  FormationResult r;
  try {
    r.id = doc.value("id", std::string());
    r.cost = doc.value("cost", std::string());
    r.scenario = doc.value("scenario", std::string());
    r.seed = doc.value("seed", std::uint64_t{0});
    const json& robots = doc.at("robots");
    if (!robots.is_array() || robots.size() < 2) {
      throw ConfigError("robots", "need at least two robots");
    }
    std::vector<Pose2> poses;
    for (std::size_t i = 1; i < robots.size(); ++i) {
      const json& p = robots[i];
      if (p.at("id").get<int>() != static_cast<int>(i) + 1) {
        throw ConfigError(indexed("robots", i), "robot ids must be 1..N in order");
      }
      const Vec2 t(p.at("x").get<double>(), p.at("y").get<double>());
      if (p.contains("cos") && p.contains("sin")) {
        Mat2 C;
        C << p["cos"].get<double>(), -p["sin"].get<double>(), p["sin"].get<double>(),
            p["cos"].get<double>();
        poses.emplace_back(C, t);
      } else {
        poses.push_back(Pose2::FromAngle(p.at("theta").get<double>(), t));
      }
    }
    r.state = FormationState(std::move(poses));
    if (doc.contains("sorted_ids")) {
      r.sorted.order = doc["sorted_ids"].at("order").get<std::vector<RobotId>>();
      r.sorted.radii = doc["sorted_ids"].at("radii").get<std::vector<double>>();
      r.sorted.validate(r.state.robot_count());
    } else {
      for (int id = 1; id <= r.state.robot_count(); ++id) r.sorted.order.push_back(id);
      r.sorted.radii.assign(static_cast<std::size_t>(r.state.robot_count()),
                            kDefaultCameraRadius);
    }
    if (doc.contains("breakdown")) {
      const json& b = doc["breakdown"];
      r.breakdown = {b.at("adj").get<double>(), b.at("overlap").get<double>(),
                     b.at("est").get<double>(), b.at("col").get<double>(),
                     b.at("total").get<double>()};
    }
    if (doc.contains("trace")) {
      const json& t = doc["trace"];
      r.converged = t.value("converged", true);
      r.iterations = t.value("iterations", 0);
      r.diagnostic = t.value("diagnostic", std::string());
      r.best_restart = t.value("best_restart", 0);
      r.restart_costs = t.value("restart_costs", std::vector<double>{});
    }
    r.gps_robots = doc.value("gps_robots", std::vector<RobotId>{});
  } catch (const json::exception& e) {
    throw ConfigError("", std::string("invalid formation file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError("sorted_ids", e.what());
  }
  return r;
}

void write_formation_file(const std::string& path, const FormationResult& result) {
  write_text_file(path, formation_to_json(result));
}

FormationResult read_formation_file(const std::string& path) {
  return formation_from_json(read_text_file(path));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  ensure_stream(in, path, "read");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  ensure_stream(out, path, "write");
  out << text;
  ensure_stream(out, path, "write");
}

}  // namespace formation::cli

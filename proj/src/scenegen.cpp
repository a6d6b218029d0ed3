// Copyright 2026 The trajpref Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "trajpref/scenegen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>

namespace trajpref
{

namespace
{

constexpr double kLaneWidth = 3.5;        // m
constexpr double kYieldGap = 1.5;         // m, interacting pair in ground truth
constexpr double kFollowGap = 2.0;        // m
constexpr double kMergeRadius = 20.0;     // m
constexpr double kBackgroundOffset = 60.0;  // m
constexpr double kBackgroundSpeed = 1.5;  // m/s
constexpr int kMaxAttempts = 200;

double wrap_angle(double a)
{
  a = std::remainder(a, 2.0 * std::numbers::pi);
  if (a <= -std::numbers::pi) {
    a += 2.0 * std::numbers::pi;
  }
  return a;
}

Vec2 heading_vector(double h) { return {std::cos(h), std::sin(h)}; }

/// Straight line, optionally followed by one circular arc and a straight exit.
struct Path
{
  Vec2 origin;  ///< position at arc length 0
  double heading{0.0};
  double turn_at{std::numeric_limits<double>::infinity()};
  double arc_length{0.0};
  double curvature{0.0};

  Vec2 at(double s) const
  {
    if (s <= turn_at) {
      return origin + s * heading_vector(heading);
    }
    const Vec2 start = origin + turn_at * heading_vector(heading);
    const double u = std::min(s - turn_at, arc_length);
    const double h = heading + curvature * u;
    const Vec2 on_arc =
      start + Vec2{(std::sin(h) - std::sin(heading)) / curvature,
                   (std::cos(heading) - std::cos(h)) / curvature};
    return on_arc + std::max(s - turn_at - arc_length, 0.0) * heading_vector(h);
  }

  double heading_at(double s) const
  {
    if (s <= turn_at) {
      return heading;
    }
    return heading + curvature * std::min(s - turn_at, arc_length);
  }
};

/// Constant speed up to t = 0, then constant acceleration toward a target speed.
struct SpeedProfile
{
  double v0{0.0};
  double accel{0.0};
  double v_target{0.0};

  double ramp_time() const { return accel == 0.0 ? 0.0 : std::abs(v_target - v0) / std::abs(accel); }

  double distance(double t) const
  {
    if (t <= 0.0 || accel == 0.0) {
      return v0 * t;
    }
    const double tau = ramp_time();
    if (t < tau) {
      return v0 * t + 0.5 * accel * t * t;
    }
    return v0 * tau + 0.5 * accel * tau * tau + v_target * (t - tau);
  }

  double speed(double t) const
  {
    if (t <= 0.0 || accel == 0.0) {
      return v0;
    }
    return t < ramp_time() ? v0 + accel * t : v_target;
  }
};

struct AgentPlan
{
  Path path;
  double s0{0.0};  ///< arc length at t = 0
  SpeedProfile profile;

  Vec2 position(double t) const { return path.at(s0 + profile.distance(t)); }
};

struct Sampler
{
  std::mt19937_64 rng;

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  bool coin(double p) { return std::bernoulli_distribution(p)(rng); }
  double normal(double sd) { return sd > 0.0 ? std::normal_distribution<double>(0.0, sd)(rng) : 0.0; }
};

SpeedProfile keep(double v) { return {v, 0.0, v}; }

/// Mostly constant speed, sometimes a gentle speed change.
SpeedProfile mild_profile(double v, Sampler & s)
{
  const double u = s.uniform(0.0, 1.0);
  if (u < 0.8) {
    return keep(v);
  }
  if (u < 0.9) {
    return {v, s.uniform(0.2, 0.6), v + 1.0};
  }
  return {v, -s.uniform(0.2, 0.6), std::max(v - 1.0, 0.0)};
}

double min_distance(const std::vector<AgentPlan> & plans, const SceneLayout & layout)
{
  double best = std::numeric_limits<double>::infinity();
  const int first = -static_cast<int>(layout.obs_steps) + 1;
  const int last = static_cast<int>(layout.fut_steps);
  for (int k = first; k <= last; ++k) {
    const double t = k * layout.dt;
    for (std::size_t i = 0; i < plans.size(); ++i) {
      for (std::size_t j = i + 1; j < plans.size(); ++j) {
        best = std::min(best, (plans[i].position(t) - plans[j].position(t)).norm());
      }
    }
  }
  return best;
}

/// Slow agents on lanes far from the interaction, on the side the second
/// interacting agent comes from.
void add_background(std::vector<AgentPlan> & plans, int count, double side, Sampler & s)
{
  for (int b = 0; b < count; ++b) {
    AgentPlan p;
    const double y = side * (kBackgroundOffset + kLaneWidth * b);
    p.path.origin = {s.uniform(-15.0, 15.0), y};
    p.path.heading = s.coin(0.5) ? 0.0 : std::numbers::pi;
    p.profile = keep(s.uniform(0.0, kBackgroundSpeed));
    plans.push_back(p);
  }
}

/// Resolves a near-simultaneous arrival: one agent keeps its speed and the other
/// brakes until the pair stays kYieldGap apart. Returns false when no braking
/// level within limits suffices.
bool resolve_conflict(
  std::vector<AgentPlan> & plans, double arrival0, double arrival1, const ScenarioSpec & spec,
  const SceneLayout & layout, Sampler & s)
{
  const std::size_t first = arrival0 <= arrival1 ? 0 : 1;
  const std::size_t passer = s.coin(spec.first_arrival_priority) ? first : 1 - first;
  const std::size_t yielder = 1 - passer;
  plans[passer].profile = keep(plans[passer].profile.v0);
  const double v = plans[yielder].profile.v0;
  const double floor = s.uniform(0.0, std::min(2.0, v));
  for (double decel = s.uniform(2.5, 4.0); decel <= 8.0; decel += 0.5) {
    plans[yielder].profile = {v, -decel, floor};
    if (min_distance(plans, layout) >= kYieldGap) {
      return true;
    }
  }
  return false;
}

std::optional<std::vector<AgentPlan>> plan_crossing(
  const ScenarioSpec & spec, const SceneLayout & layout, Sampler & s)
{
  const double angle = s.uniform(spec.angle_min, spec.angle_max) * (s.coin(0.5) ? 1.0 : -1.0);
  std::vector<AgentPlan> plans(2);
  const double v0 = s.uniform(spec.speed_min, spec.speed_max);
  const double v1 = s.uniform(spec.speed_min, spec.speed_max);
  const double t0 = s.uniform(0.8, 2.0);
  double t1 = t0;
  const bool interactive = s.coin(spec.interaction_prob);
  if (interactive) {
    t1 = t0 + s.uniform(-0.25, 0.25);
  } else {
    const double sep = s.uniform(1.0, 2.0);
    t1 = (s.coin(0.5) && t0 - sep > 0.3) ? t0 - sep : t0 + sep;
  }
  plans[0].path.heading = 0.0;
  plans[0].s0 = -v0 * t0;
  plans[0].profile = keep(v0);
  plans[1].path.heading = angle;
  plans[1].s0 = -v1 * t1;
  plans[1].profile = keep(v1);

  if (interactive) {
    if (!resolve_conflict(plans, t0, t1, spec, layout, s)) {
      return std::nullopt;
    }
  } else {
    plans[0].profile = mild_profile(v0, s);
    plans[1].profile = mild_profile(v1, s);
  }
  add_background(plans, spec.num_agents - 2, angle > 0.0 ? -1.0 : 1.0, s);
  if (min_distance(plans, layout) < kYieldGap) {
    return std::nullopt;
  }
  return plans;
}

std::optional<std::vector<AgentPlan>> plan_merge(
  const ScenarioSpec & spec, const SceneLayout & layout, Sampler & s)
{
  const double angle = s.uniform(spec.angle_min, spec.angle_max);
  std::vector<AgentPlan> plans(2);
  const double v_main = s.uniform(spec.speed_min, spec.speed_max);
  const double v_merge = s.uniform(spec.speed_min, spec.speed_max);

  // Merging path: straight approach at +angle, then a right turn that ends on
  // the main lane (heading 0) at the merge point, which becomes the origin.
  Path merge_path;
  merge_path.heading = angle;
  merge_path.turn_at = 0.0;
  merge_path.arc_length = kMergeRadius * angle;
  merge_path.curvature = -1.0 / kMergeRadius;
  const Vec2 end = merge_path.at(merge_path.arc_length);
  merge_path.origin = merge_path.origin - end;

  // The past must stay on the straight approach.
  const double t_merge = merge_path.arc_length / v_merge + s.uniform(0.1, 1.5);
  double t_main = t_merge;
  const bool interactive = s.coin(spec.interaction_prob);
  if (interactive) {
    t_main = t_merge + s.uniform(-0.25, 0.25);
  } else {
    const double sep = s.uniform(1.0, 2.0);
    t_main = (s.coin(0.5) && t_merge - sep > 0.3) ? t_merge - sep : t_merge + sep;
  }

  plans[0].path.heading = 0.0;
  plans[0].s0 = -v_main * t_main;
  plans[0].profile = keep(v_main);
  plans[1].path = merge_path;
  plans[1].s0 = merge_path.arc_length - v_merge * t_merge;
  plans[1].profile = keep(v_merge);

  if (interactive) {
    if (!resolve_conflict(plans, t_main, t_merge, spec, layout, s)) {
      return std::nullopt;
    }
  } else {
    plans[0].profile = mild_profile(v_main, s);
    plans[1].profile = mild_profile(v_merge, s);
  }
  add_background(plans, spec.num_agents - 2, -1.0, s);
  if (min_distance(plans, layout) < kYieldGap) {
    return std::nullopt;
  }
  return plans;
}

std::optional<std::vector<AgentPlan>> plan_follow(
  const ScenarioSpec & spec, const SceneLayout & layout, Sampler & s)
{
  std::vector<AgentPlan> plans(static_cast<std::size_t>(spec.num_agents));
  double x = 0.0;
  const double lead_speed = s.uniform(spec.speed_min, spec.speed_max);
  for (std::size_t i = 0; i < plans.size(); ++i) {
    const double v =
      i == 0 ? lead_speed : std::clamp(lead_speed + s.uniform(-1.5, 0.5), spec.speed_min, spec.speed_max);
    plans[i].path.origin = {x, 0.0};
    plans[i].profile = mild_profile(v, s);
    x -= s.uniform(10.0, 20.0);
  }
  if (min_distance(plans, layout) < kFollowGap) {
    return std::nullopt;
  }
  return plans;
}

std::optional<std::vector<AgentPlan>> plan_parallel(
  const ScenarioSpec & spec, const SceneLayout & layout, Sampler & s)
{
  std::vector<AgentPlan> plans(static_cast<std::size_t>(spec.num_agents));
  for (std::size_t i = 0; i < plans.size(); ++i) {
    plans[i].path.origin = {s.uniform(-10.0, 10.0), kLaneWidth * static_cast<double>(i)};
    plans[i].profile = mild_profile(s.uniform(spec.speed_min, spec.speed_max), s);
  }
  if (min_distance(plans, layout) < kFollowGap) {
    return std::nullopt;
  }
  return plans;
}

Scene render(
  const std::vector<AgentPlan> & plans, const SceneLayout & layout, const ScenarioSpec & spec, Sampler & s)
{
  // Random rigid placement of the whole scene.
  const double rot = s.uniform(-std::numbers::pi, std::numbers::pi);
  const Vec2 shift{s.uniform(-20.0, 20.0), s.uniform(-20.0, 20.0)};
  const double c = std::cos(rot);
  const double sn = std::sin(rot);
  auto place = [&](const Vec2 & p) { return Vec2{c * p.x - sn * p.y, sn * p.x + c * p.y} + shift; };
  auto turn = [&](const Vec2 & v) { return Vec2{c * v.x - sn * v.y, sn * v.x + c * v.y}; };

  Scene scene;
  scene.horizon = layout.fut_steps;
  for (std::size_t i = 0; i < plans.size(); ++i) {
    const auto & plan = plans[i];
    AgentTrack track;
    track.agent_id = static_cast<std::int64_t>(i);
    for (std::size_t k = 0; k < layout.obs_steps; ++k) {
      const double t = -static_cast<double>(layout.obs_steps - 1 - k) * layout.dt;
      const double arc = plan.s0 + plan.profile.distance(t);
      const double heading = plan.path.heading_at(arc);
      Vec2 p = place(plan.position(t));
      p.x += s.normal(spec.noise_std);
      p.y += s.normal(spec.noise_std);
      track.past_positions.push_back(p);
      track.past_velocities.push_back(turn(plan.profile.speed(t) * heading_vector(heading)));
      track.past_yaws.push_back(wrap_angle(heading + rot));
    }
    Trajectory future;
    for (std::size_t k = 1; k <= layout.fut_steps; ++k) {
      future.push_back(place(plan.position(static_cast<double>(k) * layout.dt)));
    }
    scene.agents.push_back(std::move(track));
    scene.ground_truth_futures.push_back(std::move(future));
  }
  return scene;
}

}  // namespace

std::string to_string(ScenarioKind kind)
{
  switch (kind) {
    case ScenarioKind::crossing:
      return "crossing";
    case ScenarioKind::merge:
      return "merge";
    case ScenarioKind::follow:
      return "follow";
    case ScenarioKind::parallel:
      return "parallel";
  }
  return "unknown";
}

ScenarioKind scenario_kind_from_string(const std::string & s)
{
  for (auto k : {ScenarioKind::crossing, ScenarioKind::merge, ScenarioKind::follow, ScenarioKind::parallel}) {
    if (to_string(k) == s) {
      return k;
    }
  }
  throw std::invalid_argument("unknown scenario kind '" + s + "'");
}

void ScenarioSpec::validate() const
{
  if (num_agents < 2 || num_agents > 6) {
    throw std::invalid_argument("num_agents must lie in [2, 6]");
  }
  if (!(speed_min > 0.0) || !(speed_max >= speed_min)) {
    throw std::invalid_argument("speeds must be positive with speed_min <= speed_max");
  }
  if (!(noise_std >= 0.0)) {
    throw std::invalid_argument("noise_std must be non-negative");
  }
  if (!(interaction_prob >= 0.0 && interaction_prob <= 1.0) ||
      !(first_arrival_priority >= 0.0 && first_arrival_priority <= 1.0))
  {
    throw std::invalid_argument("probabilities must lie in [0, 1]");
  }
  if (kind == ScenarioKind::crossing || kind == ScenarioKind::merge) {
    const double hi = kind == ScenarioKind::crossing ? std::numbers::pi : std::numbers::pi / 2.0;
    if (!(angle_min > 0.0) || !(angle_max >= angle_min) || !(angle_max < hi)) {
      throw std::invalid_argument(
        "infeasible " + to_string(kind) + " layout: angle range must lie in (0, " +
        (kind == ScenarioKind::crossing ? std::string("pi") : std::string("pi/2")) + ")");
    }
  }
}

Scene generate_scene(const ScenarioSpec & spec, std::uint64_t seed, const SceneLayout & layout)
{
  spec.validate();
  if (layout.obs_steps < 1 || layout.fut_steps < 1 || !(layout.dt > 0.0)) {
    throw std::invalid_argument("invalid scene layout");
  }
  Sampler s{std::mt19937_64(mix_seed(spec.rng_seed, seed))};
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::optional<std::vector<AgentPlan>> plans;
    switch (spec.kind) {
      case ScenarioKind::crossing:
        plans = plan_crossing(spec, layout, s);
        break;
      case ScenarioKind::merge:
        plans = plan_merge(spec, layout, s);
        break;
      case ScenarioKind::follow:
        plans = plan_follow(spec, layout, s);
        break;
      case ScenarioKind::parallel:
        plans = plan_parallel(spec, layout, s);
        break;
    }
    if (plans) {
      return render(*plans, layout, spec, s);
    }
  }
  throw std::invalid_argument("infeasible " + to_string(spec.kind) + " spec: no collision-free layout found");
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index)
{
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

GeneratedDataset generate_dataset(
  const std::vector<MixtureEntry> & mixture, std::size_t n, std::uint64_t seed, const SceneLayout & layout)
{
  if (mixture.empty()) {
    throw std::invalid_argument("scenario mixture is empty");
  }
  std::vector<double> weights;
  for (const auto & e : mixture) {
    if (!(e.weight >= 0.0)) {
      throw std::invalid_argument("mixture weights must be non-negative");
    }
    e.spec.validate();
    weights.push_back(e.weight);
  }
  GeneratedDataset out;
  out.scenes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::mt19937_64 pick_rng(mix_seed(seed, 2 * i));
    const auto idx = std::discrete_distribution<std::size_t>(weights.begin(), weights.end())(pick_rng);
    const auto & spec = mixture[idx].spec;
    Scene scene = generate_scene(spec, mix_seed(seed, 2 * i + 1), layout);
    scene.scene_id = "scene-" + std::to_string(i);
    out.kinds.push_back(spec.kind);
    ++out.kind_counts[to_string(spec.kind)];
    out.scenes.push_back(std::move(scene));
  }
  return out;
}

std::vector<MixtureEntry> default_mixture()
{
  ScenarioSpec crossing;
  crossing.kind = ScenarioKind::crossing;
  crossing.num_agents = 2;
  ScenarioSpec crossing3 = crossing;
  crossing3.num_agents = 3;
  ScenarioSpec crossing4 = crossing;
  crossing4.num_agents = 4;

  ScenarioSpec merge = crossing;
  merge.kind = ScenarioKind::merge;
  merge.angle_min = 0.25;
  merge.angle_max = 0.5;
  merge.num_agents = 3;

  ScenarioSpec follow = crossing;
  follow.kind = ScenarioKind::follow;
  follow.num_agents = 3;

  ScenarioSpec parallel = crossing;
  parallel.kind = ScenarioKind::parallel;
  parallel.num_agents = 3;

  return {{crossing, 0.2}, {crossing3, 0.2}, {crossing4, 0.2}, {merge, 0.15}, {follow, 0.1}, {parallel, 0.15}};
}

}  // namespace trajpref

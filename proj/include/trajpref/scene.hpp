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

#ifndef TRAJPREF__SCENE_HPP_
#define TRAJPREF__SCENE_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace trajpref
{

/// Planar point or vector in a scene-local metric frame.
struct Vec2
{
  double x{0.0};
  double y{0.0};

  Vec2 & operator+=(const Vec2 & o)
  {
    x += o.x;
    y += o.y;
    return *this;
  }
  Vec2 & operator-=(const Vec2 & o)
  {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  friend Vec2 operator+(Vec2 a, const Vec2 & b) { return a += b; }
  friend Vec2 operator-(Vec2 a, const Vec2 & b) { return a -= b; }
  friend Vec2 operator*(double s, const Vec2 & v) { return {s * v.x, s * v.y}; }
  friend bool operator==(const Vec2 &, const Vec2 &) = default;

  double norm() const { return std::hypot(x, y); }
  double dot(const Vec2 & o) const { return x * o.x + y * o.y; }
};

using Trajectory = std::vector<Vec2>;

struct AgentTrack
{
  std::int64_t agent_id{0};
  std::vector<Vec2> past_positions;
  std::vector<Vec2> past_velocities;
  std::vector<double> past_yaws;

  std::size_t obs_steps() const { return past_positions.size(); }
  friend bool operator==(const AgentTrack &, const AgentTrack &) = default;
};

/// Conditioning input of a prediction problem: past tracks of every agent plus
/// the ground-truth continuation used for training and evaluation.
struct Scene
{
  std::string scene_id;
  std::vector<AgentTrack> agents;
  std::vector<Trajectory> ground_truth_futures;
  std::size_t horizon{0};

  std::size_t num_agents() const { return agents.size(); }
  std::size_t obs_steps() const { return agents.empty() ? 0 : agents.front().obs_steps(); }
  friend bool operator==(const Scene &, const Scene &) = default;
};

/// K alternative futures for one agent with unnormalized scores.
struct AgentPrediction
{
  std::vector<Trajectory> trajectories;
  std::vector<double> logits;
};

struct MarginalPrediction
{
  std::vector<AgentPrediction> agents;

  std::size_t num_modes() const { return agents.empty() ? 0 : agents.front().logits.size(); }
};

/// One scene-level future: a trajectory per agent, plus the marginal mode each
/// agent's trajectory was taken from.
struct JointMode
{
  std::vector<Trajectory> trajectories;
  std::vector<std::size_t> source_modes;
};

struct JointModeSet
{
  std::vector<JointMode> modes;
  std::vector<double> scene_logits;
  std::vector<double> scene_probs;

  std::size_t num_modes() const { return modes.size(); }
};

struct ValidationResult
{
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

ValidationResult validate_scene(const Scene & scene);

/// Trajectory endpoint; trajectories passed here are never empty.
inline const Vec2 & final_point(const Trajectory & t) { return t.back(); }

}  // namespace trajpref

#endif  // TRAJPREF__SCENE_HPP_

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

#ifndef TESTS__UNIT__FIXTURES_HPP_
#define TESTS__UNIT__FIXTURES_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "trajpref/scene.hpp"

namespace fixtures
{

using trajpref::Trajectory;
using trajpref::Vec2;

inline Trajectory line(Vec2 start, Vec2 step, std::size_t n)
{
  Trajectory t;
  for (std::size_t i = 0; i < n; ++i) {
    t.push_back(start + static_cast<double>(i) * step);
  }
  return t;
}

inline Trajectory constant(Vec2 p, std::size_t n) { return Trajectory(n, p); }

/// Agents moving at constant velocity; the past ends at `positions[a]` and the
/// ground truth continues the motion.
inline trajpref::Scene moving_scene(
  const std::vector<Vec2> & positions, const std::vector<Vec2> & velocities, std::size_t obs = 4,
  std::size_t fut = 5, double dt = 0.1, const std::string & id = "s")
{
  trajpref::Scene s;
  s.scene_id = id;
  s.horizon = fut;
  for (std::size_t a = 0; a < positions.size(); ++a) {
    trajpref::AgentTrack track;
    track.agent_id = static_cast<std::int64_t>(a);
    const Vec2 v = velocities[a];
    for (std::size_t t = 0; t < obs; ++t) {
      const double back = static_cast<double>(obs - 1 - t) * dt;
      track.past_positions.push_back(positions[a] - back * v);
      track.past_velocities.push_back(v);
      track.past_yaws.push_back(std::atan2(v.y, v.x));
    }
    s.agents.push_back(track);
    s.ground_truth_futures.push_back(line(positions[a] + dt * v, dt * v, fut));
  }
  return s;
}

inline double rel_err(double a, double b)
{
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

inline std::vector<double> random_vector(std::mt19937_64 & rng, std::size_t n, double lo, double hi)
{
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto & x : v) {
    x = u(rng);
  }
  return v;
}

inline std::vector<std::size_t> random_permutation(std::mt19937_64 & rng, std::size_t n)
{
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = i;
  }
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

/// Marginal prediction with random logits and random-walk trajectories.
inline trajpref::MarginalPrediction random_prediction(
  std::mt19937_64 & rng, std::size_t agents, std::size_t modes, std::size_t steps, double spread = 3.0)
{
  std::normal_distribution<double> n(0.0, 1.0);
  trajpref::MarginalPrediction p;
  for (std::size_t a = 0; a < agents; ++a) {
    trajpref::AgentPrediction ap;
    for (std::size_t k = 0; k < modes; ++k) {
      Vec2 pos{spread * n(rng), spread * n(rng)};
      Trajectory t;
      for (std::size_t s = 0; s < steps; ++s) {
        pos += Vec2{0.3 * n(rng), 0.3 * n(rng)};
        t.push_back(pos);
      }
      ap.trajectories.push_back(t);
      ap.logits.push_back(n(rng));
    }
    p.agents.push_back(ap);
  }
  return p;
}

}  // namespace fixtures

#endif  // TESTS__UNIT__FIXTURES_HPP_

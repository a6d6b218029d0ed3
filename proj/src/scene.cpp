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

#include "trajpref/scene.hpp"

#include <numbers>

namespace trajpref
{

namespace
{

bool finite(const Vec2 & v) { return std::isfinite(v.x) && std::isfinite(v.y); }

}  // namespace

ValidationResult validate_scene(const Scene & scene)
{
  ValidationResult result;
  auto fail = [&result](std::string msg) { result.violations.push_back(std::move(msg)); };

  if (scene.agents.empty()) {
    fail("no agents (A = 0)");
  }
  if (scene.horizon < 1) {
    fail("horizon T_fut must be at least 1");
  }
  if (scene.ground_truth_futures.size() != scene.agents.size()) {
    fail("future count mismatch: " + std::to_string(scene.ground_truth_futures.size()) +
         " futures for " + std::to_string(scene.agents.size()) + " agents");
  }

  bool non_finite = false;
  const std::size_t t_obs = scene.obs_steps();
  for (std::size_t i = 0; i < scene.agents.size(); ++i) {
    const auto & a = scene.agents[i];
    const std::string who = "agent " + std::to_string(i);
    if (a.past_positions.empty()) {
      fail(who + ": empty past track (T_obs must be at least 1)");
    }
    if (a.past_velocities.size() != a.past_positions.size() ||
        a.past_yaws.size() != a.past_positions.size())
    {
      fail(who + ": past sequence length mismatch");
    }
    if (a.past_positions.size() != t_obs) {
      fail(who + ": T_obs differs from the first agent");
    }
    for (const auto & p : a.past_positions) {
      non_finite = non_finite || !finite(p);
    }
    for (const auto & v : a.past_velocities) {
      non_finite = non_finite || !finite(v);
    }
    for (double yaw : a.past_yaws) {
      if (!std::isfinite(yaw)) {
        non_finite = true;
      } else if (!(yaw > -std::numbers::pi && yaw <= std::numbers::pi)) {
        fail(who + ": yaw outside (-pi, pi]");
        break;
      }
    }
  }
  for (std::size_t i = 0; i < scene.ground_truth_futures.size(); ++i) {
    const auto & f = scene.ground_truth_futures[i];
    if (f.size() != scene.horizon) {
      fail("agent " + std::to_string(i) + ": future length mismatch (" + std::to_string(f.size()) +
           " steps, horizon " + std::to_string(scene.horizon) + ")");
    }
    for (const auto & p : f) {
      non_finite = non_finite || !finite(p);
    }
  }
  if (non_finite) {
    fail("non-finite coordinate");
  }
  return result;
}

}  // namespace trajpref

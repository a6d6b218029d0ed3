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

#ifndef TRAJPREF__SCENEGEN_HPP_
#define TRAJPREF__SCENEGEN_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "trajpref/scene.hpp"

namespace trajpref
{

enum class ScenarioKind { crossing, merge, follow, parallel };

std::string to_string(ScenarioKind kind);
ScenarioKind scenario_kind_from_string(const std::string & s);

struct SceneLayout
{
  std::size_t obs_steps{10};
  std::size_t fut_steps{30};
  double dt{0.1};
};

struct ScenarioSpec
{
  ScenarioKind kind{ScenarioKind::crossing};
  int num_agents{2};
  double speed_min{3.0};  ///< m/s
  double speed_max{8.0};
  double angle_min{1.0};  ///< crossing/merge angle [rad]
  double angle_max{2.1};
  double noise_std{0.0};  ///< m, past positions only
  /// Crossing/merge: probability that both agents would reach the conflict
  /// point nearly together, forcing one of them to yield.
  double interaction_prob{0.35};
  /// Crossing/merge: probability that the agent arriving first keeps right of way.
  double first_arrival_priority{1.0};
  std::uint64_t rng_seed{0};

  void validate() const;
};

struct MixtureEntry
{
  ScenarioSpec spec;
  double weight{1.0};
};

/// Deterministic in (spec, seed). Crossing and merge ground truths keep the two
/// interacting agents at least 1.5 m apart; every ground truth is collision-free
/// at 1 m. Throws std::invalid_argument for infeasible specs.
Scene generate_scene(const ScenarioSpec & spec, std::uint64_t seed, const SceneLayout & layout = {});

struct GeneratedDataset
{
  std::vector<Scene> scenes;
  std::vector<ScenarioKind> kinds;  ///< kind of each scene
  std::map<std::string, std::size_t> kind_counts;
};

/// `n` scenes drawn from the weighted mixture; scene i uses a seed derived from
/// (seed, i) and is named "scene-<i>".
GeneratedDataset generate_dataset(
  const std::vector<MixtureEntry> & mixture, std::size_t n, std::uint64_t seed,
  const SceneLayout & layout = {});

/// Default mixture used by the pipeline (majority crossing scenes).
std::vector<MixtureEntry> default_mixture();

/// splitmix64 finalizer, used to derive per-scene seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace trajpref

#endif  // TRAJPREF__SCENEGEN_HPP_

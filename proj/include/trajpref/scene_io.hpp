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

#ifndef TRAJPREF__SCENE_IO_HPP_
#define TRAJPREF__SCENE_IO_HPP_

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "trajpref/scene.hpp"

namespace trajpref
{

inline constexpr int kSceneSchemaVersion = 1;
inline constexpr int kPredictionSchemaVersion = 1;

/// Scene files are JSON lines. The first line is a header record
/// {"record": "header", "schema_version", "T_obs", "T_fut"}; every following
/// line holds one scene. An empty file is an empty dataset.
std::vector<Scene> read_scenes(const std::filesystem::path & path);
void write_scenes(const std::filesystem::path & path, std::span<const Scene> scenes);

std::vector<Scene> parse_scenes(const std::string & text);
std::string format_scenes(std::span<const Scene> scenes);

/// Prediction dumps: a header line followed by one
/// {"scene_id", "agents": [{"logits", "trajectories"}]} record per scene.
using PredictionMap = std::map<std::string, MarginalPrediction>;

PredictionMap read_predictions(const std::filesystem::path & path);
void write_predictions(
  const std::filesystem::path & path, std::span<const std::string> scene_ids,
  std::span<const MarginalPrediction> predictions);

}  // namespace trajpref

#endif  // TRAJPREF__SCENE_IO_HPP_

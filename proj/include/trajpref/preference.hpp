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

#ifndef TRAJPREF__PREFERENCE_HPP_
#define TRAJPREF__PREFERENCE_HPP_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "trajpref/collision.hpp"
#include "trajpref/scene.hpp"

namespace trajpref
{

/// Mean over agents of the endpoint distance to the ground truth.
double avg_fde(std::span<const Trajectory> mode, std::span<const Trajectory> ground_truth);

struct PreferenceRecord
{
  std::vector<double> avg_fde;
  std::vector<double> repeller;
  std::vector<double> cost;
  /// ranking[k] is the index of the (k+1)-th best mode.
  std::vector<std::size_t> ranking;
  double lambda{0.0};
};

/// Cost C_k = avgFDE_k + lambda * R_k per joint mode, ranked ascending. Ties go
/// to the more probable mode, then the lower index.
PreferenceRecord preference_cost(
  const JointModeSet & joint, std::span<const Trajectory> ground_truth, double lambda,
  const RepellerParams & repeller);

struct ExtractionConfig
{
  double delta{2.5};  ///< cost-spread threshold [m]
  double collision_threshold{1.0};

  void validate() const;
};

/// Per-scene input to extraction.
struct SceneAssessment
{
  std::string scene_id;
  std::vector<double> costs;
  bool has_collision{false};
};

SceneAssessment assess_scene(
  const std::string & scene_id, const JointModeSet & joint, std::span<const Trajectory> ground_truth,
  double lambda, const RepellerParams & repeller, double collision_threshold);

struct ExtractionSummary
{
  std::size_t total{0};
  std::size_t extracted{0};
  double fraction{0.0};
  std::size_t collision_branch_count{0};  ///< scenes with a colliding mode
  std::size_t spread_branch_count{0};     ///< scenes with C_max - C_min > delta
};

struct ExtractionResult
{
  std::vector<std::string> scene_ids;
  ExtractionSummary summary;
};

/// A scene is kept when any mode collides or its cost spread exceeds delta.
ExtractionResult extract_preference_subset(
  std::span<const SceneAssessment> scenes, const ExtractionConfig & config);

/// One id per line, plus the summary as JSON next to it (`<path>.summary.json`).
void write_subset(const std::filesystem::path & path, const ExtractionResult & result);
std::vector<std::string> read_subset(const std::filesystem::path & path);
std::filesystem::path subset_summary_path(const std::filesystem::path & subset_path);

}  // namespace trajpref

#endif  // TRAJPREF__PREFERENCE_HPP_

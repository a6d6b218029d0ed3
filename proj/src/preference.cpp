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

#include "trajpref/preference.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "trajpref/file_util.hpp"

namespace trajpref
{

double avg_fde(std::span<const Trajectory> mode, std::span<const Trajectory> ground_truth)
{
  if (mode.size() != ground_truth.size() || mode.empty()) {
    throw std::invalid_argument("avg_fde: agent count mismatch");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < mode.size(); ++i) {
    if (mode[i].empty() || mode[i].size() != ground_truth[i].size()) {
      throw std::invalid_argument("avg_fde: trajectory length mismatch");
    }
    sum += (final_point(mode[i]) - final_point(ground_truth[i])).norm();
  }
  return sum / static_cast<double>(mode.size());
}

PreferenceRecord preference_cost(
  const JointModeSet & joint, std::span<const Trajectory> ground_truth, double lambda,
  const RepellerParams & repeller)
{
  const std::size_t k = joint.num_modes();
  PreferenceRecord rec;
  rec.lambda = lambda;
  rec.avg_fde.resize(k);
  rec.repeller.resize(k);
  rec.cost.resize(k);
  for (std::size_t m = 0; m < k; ++m) {
    const auto & traj = joint.modes[m].trajectories;
    rec.avg_fde[m] = avg_fde(traj, ground_truth);
    rec.repeller[m] =
      repeller_cost(repeller_matrix(pairwise_distances(traj), repeller), repeller.epsilon);
    rec.cost[m] = rec.avg_fde[m] + lambda * rec.repeller[m];
  }
  rec.ranking.resize(k);
  std::iota(rec.ranking.begin(), rec.ranking.end(), std::size_t{0});
  std::sort(rec.ranking.begin(), rec.ranking.end(), [&](std::size_t a, std::size_t b) {
    if (rec.cost[a] != rec.cost[b]) {
      return rec.cost[a] < rec.cost[b];
    }
    if (joint.scene_probs[a] != joint.scene_probs[b]) {
      return joint.scene_probs[a] > joint.scene_probs[b];
    }
    return a < b;
  });
  return rec;
}

void ExtractionConfig::validate() const
{
  if (!(delta >= 0.0)) {
    throw std::invalid_argument("delta must be non-negative");
  }
  if (!(collision_threshold > 0.0)) {
    throw std::invalid_argument("collision threshold must be positive");
  }
}

SceneAssessment assess_scene(
  const std::string & scene_id, const JointModeSet & joint, std::span<const Trajectory> ground_truth,
  double lambda, const RepellerParams & repeller, double collision_threshold)
{
  SceneAssessment out;
  out.scene_id = scene_id;
  out.costs = preference_cost(joint, ground_truth, lambda, repeller).cost;
  for (const auto & m : joint.modes) {
    if (detect_collisions(m.trajectories, collision_threshold).collided) {
      out.has_collision = true;
      break;
    }
  }
  return out;
}

ExtractionResult extract_preference_subset(
  std::span<const SceneAssessment> scenes, const ExtractionConfig & config)
{
  config.validate();
  ExtractionResult out;
  out.summary.total = scenes.size();
  for (const auto & s : scenes) {
    bool spread = false;
    if (!s.costs.empty()) {
      const auto [lo, hi] = std::minmax_element(s.costs.begin(), s.costs.end());
      spread = (*hi - *lo) > config.delta;
    }
    out.summary.collision_branch_count += s.has_collision ? 1 : 0;
    out.summary.spread_branch_count += spread ? 1 : 0;
    if (s.has_collision || spread) {
      out.scene_ids.push_back(s.scene_id);
    }
  }
  out.summary.extracted = out.scene_ids.size();
  out.summary.fraction = scenes.empty() ? 0.0
                                        : static_cast<double>(out.summary.extracted) /
                                            static_cast<double>(out.summary.total);
  return out;
}

std::filesystem::path subset_summary_path(const std::filesystem::path & subset_path)
{
  auto p = subset_path;
  p += ".summary.json";
  return p;
}

void write_subset(const std::filesystem::path & path, const ExtractionResult & result)
{
  std::string ids;
  for (const auto & id : result.scene_ids) {
    ids += id;
    ids += '\n';
  }
  write_text_file(path, ids);
  const auto & s = result.summary;
  nlohmann::json summary = {
    {"total", s.total},
    {"extracted", s.extracted},
    {"fraction", s.fraction},
    {"collision_branch_count", s.collision_branch_count},
    {"spread_branch_count", s.spread_branch_count}};
  write_text_file(subset_summary_path(path), summary.dump(2) + "\n");
}

std::vector<std::string> read_subset(const std::filesystem::path & path)
{
  std::istringstream in(read_text_file(path));
  std::vector<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) {
      ids.push_back(line);
    }
  }
  return ids;
}

}  // namespace trajpref

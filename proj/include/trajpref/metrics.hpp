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

#ifndef TRAJPREF__METRICS_HPP_
#define TRAJPREF__METRICS_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "trajpref/collision.hpp"
#include "trajpref/predictor.hpp"
#include "trajpref/scene.hpp"
#include "trajpref/scene_io.hpp"

namespace trajpref
{

/// Fraction of modes with at least one collision.
double scene_scr(const CollisionSummary & summary);

/// Probability mass on colliding modes. Throws std::invalid_argument if the
/// probabilities do not sum to 1 within 1e-6.
double scene_pscr(std::span<const double> scene_probs, const CollisionSummary & summary);

/// Minimum over modes of the mean final-step displacement error.
double min_joint_fde(const JointModeSet & joint, std::span<const Trajectory> ground_truth);

struct SceneMetrics
{
  std::string scene_id;
  double scr{0.0};
  double pscr{0.0};
  double min_joint_fde{0.0};
  double avg_fde{0.0};  ///< mean avgFDE over the evaluated modes
  double min_distance{0.0};  ///< smallest inter-agent distance in any evaluated mode
};

struct MetricsReport
{
  double scr{0.0};
  double pscr{0.0};
  double min_joint_fde{0.0};
  double avg_fde{0.0};
  std::size_t n_scenes{0};
  std::size_t n_modes_evaluated{0};
  double collision_threshold{1.0};
  bool renormalized_top_n{true};
  std::vector<SceneMetrics> scenes;
};

struct EvalOptions
{
  std::size_t top_n{6};
  double collision_threshold{1.0};
};

SceneMetrics evaluate_scene(const Scene & scene, const MarginalPrediction & pred, const EvalOptions & options);

/// Per-scene metrics averaged with equal weight per scene.
MetricsReport evaluate_dataset(
  std::span<const Scene> scenes, const PredictorParams & params, const EvalOptions & options = {});

/// Same, from stored predictions. Throws MissingArtifactError naming the first
/// scene without a prediction.
MetricsReport evaluate_dataset(
  std::span<const Scene> scenes, const PredictionMap & predictions, const EvalOptions & options = {});

/// Mean over scenes of already computed per-scene metrics.
MetricsReport aggregate_metrics(std::vector<SceneMetrics> scenes, const EvalOptions & options);

struct MetricChange
{
  std::string name;
  double before{0.0};
  double after{0.0};
  double relative_change_percent{0.0};  ///< NaN when `before` is 0 and `after` is not
};

std::vector<MetricChange> compare_reports(const MetricsReport & before, const MetricsReport & after);

/// Report as a JSON object (scene rows excluded).
std::string report_json(const MetricsReport & report);
/// One CSV row per scene.
std::string report_table_csv(const MetricsReport & report);
/// Human-readable summary with collision rates scaled by 1e3.
std::string report_text(const MetricsReport & report);
std::string comparison_json(const std::vector<MetricChange> & changes);
std::string comparison_text(const std::vector<MetricChange> & changes);

/// Plausibility of predicted motion against ground truth over a dataset.
struct RealismCheck
{
  /// Largest over future steps of |mean predicted speed - mean ground-truth
  /// speed| / std of ground-truth speed, using the most probable joint mode.
  double max_speed_z{0.0};
  /// Fraction of scenes whose most probable joint mode brings two agents closer
  /// than `collapse_distance`.
  double collapse_fraction{0.0};
  double collapse_distance{0.2};
  bool speed_ok{true};
  bool distance_ok{true};
  bool passed() const { return speed_ok && distance_ok; }
};

RealismCheck check_realism(
  std::span<const Scene> scenes, const PredictorParams & params, double collapse_distance = 0.2,
  double max_z = 3.0, double max_collapse_fraction = 0.1);

}  // namespace trajpref

#endif  // TRAJPREF__METRICS_HPP_

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

#include "trajpref/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "trajpref/aggregation.hpp"
#include "trajpref/errors.hpp"
#include "trajpref/preference.hpp"

namespace trajpref
{

using nlohmann::ordered_json;

double scene_scr(const CollisionSummary & summary)
{
  if (summary.modes.empty()) {
    throw std::invalid_argument("scene_scr: no modes");
  }
  const auto hits = std::count_if(
    summary.modes.begin(), summary.modes.end(), [](const ModeCollisions & m) { return m.collided; });
  return static_cast<double>(hits) / static_cast<double>(summary.modes.size());
}

double scene_pscr(std::span<const double> scene_probs, const CollisionSummary & summary)
{
  if (scene_probs.size() != summary.modes.size()) {
    throw std::invalid_argument("scene_pscr: probability count does not match mode count");
  }
  const double total = std::accumulate(scene_probs.begin(), scene_probs.end(), 0.0);
  if (!(std::abs(total - 1.0) <= 1e-6)) {
    throw std::invalid_argument("scene_pscr: probabilities sum to " + std::to_string(total) + ", not 1");
  }
  double p = 0.0;
  for (std::size_t k = 0; k < scene_probs.size(); ++k) {
    if (summary.modes[k].collided) {
      p += scene_probs[k];
    }
  }
  return p;
}

double min_joint_fde(const JointModeSet & joint, std::span<const Trajectory> ground_truth)
{
  double best = std::numeric_limits<double>::infinity();
  for (const auto & mode : joint.modes) {
    best = std::min(best, avg_fde(mode.trajectories, ground_truth));
  }
  return best;
}

SceneMetrics evaluate_scene(const Scene & scene, const MarginalPrediction & pred, const EvalOptions & options)
{
  if (pred.agents.size() != scene.agents.size()) {
    throw std::invalid_argument("prediction for scene '" + scene.scene_id + "' has the wrong agent count");
  }
  const JointModeSet top = select_top_modes(aggregate_to_joint(pred), options.top_n);
  const CollisionSummary collisions = summarize_collisions(top, options.collision_threshold);
  SceneMetrics m;
  m.scene_id = scene.scene_id;
  m.scr = scene_scr(collisions);
  m.pscr = scene_pscr(top.scene_probs, collisions);
  m.min_joint_fde = std::numeric_limits<double>::infinity();
  m.min_distance = std::numeric_limits<double>::infinity();
  for (const auto & mode : top.modes) {
    const double fde = avg_fde(mode.trajectories, scene.ground_truth_futures);
    m.min_joint_fde = std::min(m.min_joint_fde, fde);
    m.avg_fde += fde;
    m.min_distance = std::min(m.min_distance, min_pairwise_distance(mode.trajectories));
  }
  m.avg_fde /= static_cast<double>(top.modes.size());
  return m;
}

MetricsReport aggregate_metrics(std::vector<SceneMetrics> scenes, const EvalOptions & options)
{
  MetricsReport r;
  r.n_scenes = scenes.size();
  r.n_modes_evaluated = options.top_n;
  r.collision_threshold = options.collision_threshold;
  r.renormalized_top_n = true;
  if (!scenes.empty()) {
    for (const auto & s : scenes) {
      r.scr += s.scr;
      r.pscr += s.pscr;
      r.min_joint_fde += s.min_joint_fde;
      r.avg_fde += s.avg_fde;
    }
    const double n = static_cast<double>(scenes.size());
    r.scr /= n;
    r.pscr /= n;
    r.min_joint_fde /= n;
    r.avg_fde /= n;
  }
  r.scenes = std::move(scenes);
  return r;
}

MetricsReport evaluate_dataset(
  std::span<const Scene> scenes, const PredictorParams & params, const EvalOptions & options)
{
  std::vector<SceneMetrics> rows;
  rows.reserve(scenes.size());
  for (const auto & scene : scenes) {
    rows.push_back(evaluate_scene(scene, forward(params, scene), options));
  }
  return aggregate_metrics(std::move(rows), options);
}

MetricsReport evaluate_dataset(
  std::span<const Scene> scenes, const PredictionMap & predictions, const EvalOptions & options)
{
  std::vector<SceneMetrics> rows;
  rows.reserve(scenes.size());
  for (const auto & scene : scenes) {
    const auto it = predictions.find(scene.scene_id);
    if (it == predictions.end()) {
      throw MissingArtifactError("no prediction for scene '" + scene.scene_id + "'");
    }
    rows.push_back(evaluate_scene(scene, it->second, options));
  }
  return aggregate_metrics(std::move(rows), options);
}

std::vector<MetricChange> compare_reports(const MetricsReport & before, const MetricsReport & after)
{
  auto change = [](const std::string & name, double b, double a) {
    MetricChange c{name, b, a, 0.0};
    if (b != 0.0) {
      c.relative_change_percent = 100.0 * (a - b) / b;
    } else if (a != 0.0) {
      c.relative_change_percent = std::numeric_limits<double>::quiet_NaN();
    }
    return c;
  };
  return {
    change("scr", before.scr, after.scr),
    change("pscr", before.pscr, after.pscr),
    change("min_joint_fde", before.min_joint_fde, after.min_joint_fde),
    change("avg_fde", before.avg_fde, after.avg_fde),
  };
}

namespace
{

ordered_json number_or_null(double v)
{
  return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
}

std::string fixed(double v, int digits)
{
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

}  // namespace

std::string report_json(const MetricsReport & report)
{
  ordered_json j = {
    {"scr", report.scr},
    {"pscr", report.pscr},
    {"min_joint_fde", report.min_joint_fde},
    {"avg_fde", report.avg_fde},
    {"n_scenes", report.n_scenes},
    {"n_modes_evaluated", report.n_modes_evaluated},
    {"collision_threshold", report.collision_threshold},
    {"renormalized_top_n", report.renormalized_top_n},
    {"aggregation", "per_scene_mean"},
  };
  return j.dump(2) + "\n";
}

std::string report_table_csv(const MetricsReport & report)
{
  std::ostringstream os;
  os << std::setprecision(17);
  os << "scene_id,scr,pscr,min_joint_fde,avg_fde,min_distance\n";
  for (const auto & s : report.scenes) {
    os << s.scene_id << ',' << s.scr << ',' << s.pscr << ',' << s.min_joint_fde << ',' << s.avg_fde << ','
       << s.min_distance << '\n';
  }
  return os.str();
}

std::string report_text(const MetricsReport & report)
{
  std::ostringstream os;
  os << "scenes:            " << report.n_scenes << '\n'
     << "modes evaluated:   " << report.n_modes_evaluated << " (renormalized)\n"
     << "SCR  (x1e3):       " << fixed(report.scr * 1e3, 2) << '\n'
     << "pSCR (x1e3):       " << fixed(report.pscr * 1e3, 2) << '\n'
     << "MinJointFDE [m]:   " << fixed(report.min_joint_fde, 4) << '\n'
     << "avgFDE [m]:        " << fixed(report.avg_fde, 4) << '\n';
  return os.str();
}

std::string comparison_json(const std::vector<MetricChange> & changes)
{
  ordered_json j = ordered_json::object();
  for (const auto & c : changes) {
    j[c.name] = {
      {"before", c.before},
      {"after", c.after},
      {"relative_change_percent", number_or_null(c.relative_change_percent)},
    };
  }
  return j.dump(2) + "\n";
}

std::string comparison_text(const std::vector<MetricChange> & changes)
{
  std::ostringstream os;
  os << std::left << std::setw(16) << "metric" << std::right << std::setw(14) << "before" << std::setw(14)
     << "after" << std::setw(12) << "change" << '\n';
  for (const auto & c : changes) {
    const bool rate = c.name == "scr" || c.name == "pscr";
    const double scale = rate ? 1e3 : 1.0;
    os << std::left << std::setw(16) << (rate ? c.name + " x1e3" : c.name) << std::right << std::setw(14)
       << fixed(c.before * scale, 3) << std::setw(14) << fixed(c.after * scale, 3) << std::setw(11)
       << (std::isfinite(c.relative_change_percent) ? fixed(c.relative_change_percent, 1) : std::string("n/a"))
       << "%\n";
  }
  return os.str();
}

RealismCheck check_realism(
  std::span<const Scene> scenes, const PredictorParams & params, double collapse_distance, double max_z,
  double max_collapse_fraction)
{
  RealismCheck out;
  out.collapse_distance = collapse_distance;
  if (scenes.empty()) {
    return out;
  }
  const std::size_t steps = scenes.front().horizon;
  const double dt = params.dims.dt;
  std::vector<double> pred_sum(steps, 0.0), gt_sum(steps, 0.0), gt_sq(steps, 0.0);
  std::size_t samples = 0;
  std::size_t collapsed = 0;
  auto speed = [&](const Trajectory & traj, const Vec2 & start, std::size_t t) {
    const Vec2 prev = t == 0 ? start : traj[t - 1];
    return (traj[t] - prev).norm() / dt;
  };
  for (const auto & scene : scenes) {
    const JointModeSet joint = aggregate_to_joint(forward(params, scene));
    const auto best = static_cast<std::size_t>(
      std::max_element(joint.scene_probs.begin(), joint.scene_probs.end()) - joint.scene_probs.begin());
    const auto & mode = joint.modes[best].trajectories;
    if (min_pairwise_distance(mode) < collapse_distance) {
      ++collapsed;
    }
    for (std::size_t a = 0; a < scene.agents.size(); ++a) {
      const Vec2 start = scene.agents[a].past_positions.back();
      for (std::size_t t = 0; t < steps; ++t) {
        const double g = speed(scene.ground_truth_futures[a], start, t);
        pred_sum[t] += speed(mode[a], start, t);
        gt_sum[t] += g;
        gt_sq[t] += g * g;
      }
      ++samples;
    }
  }
  const double n = static_cast<double>(samples);
  for (std::size_t t = 0; t < steps; ++t) {
    const double mean = gt_sum[t] / n;
    const double sd = std::sqrt(std::max(gt_sq[t] / n - mean * mean, 1e-12));
    out.max_speed_z = std::max(out.max_speed_z, std::abs(pred_sum[t] / n - mean) / sd);
  }
  out.collapse_fraction = static_cast<double>(collapsed) / static_cast<double>(scenes.size());
  out.speed_ok = out.max_speed_z <= max_z;
  out.distance_ok = out.collapse_fraction < max_collapse_fraction;
  return out;
}

}  // namespace trajpref

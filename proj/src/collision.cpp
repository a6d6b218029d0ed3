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

#include "trajpref/collision.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace trajpref
{

namespace
{

std::size_t common_length(std::span<const Trajectory> mode)
{
  if (mode.empty()) {
    throw std::invalid_argument("mode has no agents");
  }
  const std::size_t steps = mode.front().size();
  for (const auto & t : mode) {
    if (t.size() != steps) {
      throw std::invalid_argument(
        "trajectory length mismatch: " + std::to_string(t.size()) + " vs " +
        std::to_string(steps));
    }
  }
  return steps;
}

}  // namespace

void RepellerParams::validate() const
{
  if (!(radius > 0.0)) {
    throw std::invalid_argument("repeller radius must be positive");
  }
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("repeller epsilon must be positive");
  }
}

DistanceTensor pairwise_distances(std::span<const Trajectory> mode)
{
  const std::size_t steps = common_length(mode);
  const std::size_t n = mode.size();
  DistanceTensor d(n, steps);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t t = 0; t < steps; ++t) {
        const double dist = (mode[i][t] - mode[j][t]).norm();
        d(i, j, t) = dist;
        d(j, i, t) = dist;
      }
    }
  }
  return d;
}

PairwiseTensor repeller_matrix(const DistanceTensor & delta, const RepellerParams & params)
{
  params.validate();
  PairwiseTensor a(delta.agents(), delta.steps());
  for (std::size_t i = 0; i < delta.agents(); ++i) {
    for (std::size_t j = 0; j < delta.agents(); ++j) {
      if (i == j) {
        continue;
      }
      for (std::size_t t = 0; t < delta.steps(); ++t) {
        a(i, j, t) = std::max(1.0 - delta(i, j, t) / params.radius, 0.0);
      }
    }
  }
  return a;
}

double repeller_cost(const PairwiseTensor & repeller, double epsilon)
{
  double sum = 0.0;
  std::size_t positive = 0;
  for (double v : repeller.values()) {
    sum += v;
    positive += v > 0.0 ? 1 : 0;
  }
  return sum / (static_cast<double>(positive) + epsilon);
}

RepellerGradient repeller_cost_gradient(std::span<const Trajectory> mode, const RepellerParams & params)
{
  params.validate();
  const std::size_t steps = common_length(mode);
  const std::size_t n = mode.size();

  RepellerGradient out;
  out.d_positions.assign(n, Trajectory(steps));

  // Each unordered pair fills two symmetric entries of the repeller tensor.
  double sum = 0.0;
  std::size_t positive = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t t = 0; t < steps; ++t) {
        const double a = std::max(1.0 - (mode[i][t] - mode[j][t]).norm() / params.radius, 0.0);
        if (a > 0.0) {
          sum += 2.0 * a;
          positive += 2;
        }
      }
    }
  }
  const double denom = static_cast<double>(positive) + params.epsilon;
  out.cost = sum / denom;
  if (positive == 0) {
    return out;
  }

  // d cost / d a = 1 / denom per positive entry; d a / d d = -1 / r.
  const double scale = -2.0 / (denom * params.radius);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t t = 0; t < steps; ++t) {
        const Vec2 diff = mode[i][t] - mode[j][t];
        const double d = diff.norm();
        if (!(d < params.radius) || d == 0.0) {
          continue;
        }
        const Vec2 g = (scale / d) * diff;
        out.d_positions[i][t] += g;
        out.d_positions[j][t] -= g;
      }
    }
  }
  return out;
}

ModeCollisions detect_collisions(std::span<const Trajectory> mode, double threshold_m)
{
  if (!(threshold_m > 0.0)) {
    throw std::invalid_argument("collision threshold must be positive");
  }
  const std::size_t steps = common_length(mode);
  ModeCollisions out;
  for (std::size_t i = 0; i < mode.size(); ++i) {
    for (std::size_t j = i + 1; j < mode.size(); ++j) {
      for (std::size_t t = 0; t < steps; ++t) {
        if ((mode[i][t] - mode[j][t]).norm() < threshold_m) {
          ++out.count;
          break;
        }
      }
    }
  }
  out.collided = out.count > 0;
  return out;
}

CollisionSummary summarize_collisions(const JointModeSet & joint, double threshold_m)
{
  CollisionSummary summary;
  summary.threshold = threshold_m;
  summary.modes.reserve(joint.num_modes());
  for (const auto & m : joint.modes) {
    summary.modes.push_back(detect_collisions(m.trajectories, threshold_m));
  }
  return summary;
}

double min_pairwise_distance(std::span<const Trajectory> mode)
{
  const std::size_t steps = common_length(mode);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < mode.size(); ++i) {
    for (std::size_t j = i + 1; j < mode.size(); ++j) {
      for (std::size_t t = 0; t < steps; ++t) {
        best = std::min(best, (mode[i][t] - mode[j][t]).norm());
      }
    }
  }
  return best;
}

}  // namespace trajpref

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

#ifndef TRAJPREF__COLLISION_HPP_
#define TRAJPREF__COLLISION_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "trajpref/scene.hpp"

namespace trajpref
{

/// Dense A x A x T tensor indexed (i, j, t), used for pairwise distances and the
/// repeller matrix of one joint mode.
class PairwiseTensor
{
public:
  PairwiseTensor() = default;
  PairwiseTensor(std::size_t agents, std::size_t steps)
  : agents_(agents), steps_(steps), values_(agents * agents * steps, 0.0)
  {
  }

  std::size_t agents() const { return agents_; }
  std::size_t steps() const { return steps_; }

  double operator()(std::size_t i, std::size_t j, std::size_t t) const
  {
    return values_[index(i, j, t)];
  }
  double & operator()(std::size_t i, std::size_t j, std::size_t t) { return values_[index(i, j, t)]; }

  std::span<const double> values() const { return values_; }

private:
  std::size_t index(std::size_t i, std::size_t j, std::size_t t) const
  {
    return (i * agents_ + j) * steps_ + t;
  }

  std::size_t agents_{0};
  std::size_t steps_{0};
  std::vector<double> values_;
};

using DistanceTensor = PairwiseTensor;

struct RepellerParams
{
  double radius{1.0};  ///< interaction radius r [m]
  double epsilon{1e-6};

  void validate() const;
};

/// Euclidean distance between every agent pair at every step of one mode.
/// Throws std::invalid_argument when trajectory lengths differ.
DistanceTensor pairwise_distances(std::span<const Trajectory> mode);

/// max(0, 1 - d / r) off the diagonal, 0 on it.
PairwiseTensor repeller_matrix(const DistanceTensor & delta, const RepellerParams & params);

/// Sum of the entries over (number of strictly positive entries + epsilon).
double repeller_cost(const PairwiseTensor & repeller, double epsilon);

struct RepellerGradient
{
  double cost{0.0};
  /// d cost / d position, laid out like the input mode (agent, step).
  std::vector<Trajectory> d_positions;
};

/// Repeller cost of a mode and its gradient with respect to every position.
/// The positive-entry count is piecewise constant and the hinge subgradient at
/// zero is taken as 0; coincident points contribute no gradient.
RepellerGradient repeller_cost_gradient(std::span<const Trajectory> mode, const RepellerParams & params);

struct ModeCollisions
{
  int count{0};  ///< unordered agent pairs closer than the threshold at some step
  bool collided{false};
};

struct CollisionSummary
{
  std::vector<ModeCollisions> modes;
  double threshold{1.0};
};

/// Counts unordered pairs whose minimum distance over time is strictly below
/// `threshold_m`.
ModeCollisions detect_collisions(std::span<const Trajectory> mode, double threshold_m);

CollisionSummary summarize_collisions(const JointModeSet & joint, double threshold_m);

/// Smallest distance between any two agents at any step; +inf for a single agent.
double min_pairwise_distance(std::span<const Trajectory> mode);

}  // namespace trajpref

#endif  // TRAJPREF__COLLISION_HPP_

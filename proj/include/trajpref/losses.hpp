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

#ifndef TRAJPREF__LOSSES_HPP_
#define TRAJPREF__LOSSES_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "trajpref/collision.hpp"
#include "trajpref/scene.hpp"

namespace trajpref
{

struct SimPOConfig
{
  double beta{2.0};   ///< reward scale
  double gamma{5.0};  ///< target reward margin per rank step

  void validate() const;
};

/// -log sigmoid(reward_w - reward_l - gamma).
double bt_nll(double reward_w, double reward_l, double gamma);

/// Plackett-Luce negative log-likelihood of `ranking` with a rank-scaled margin:
/// stage k (1-based) compares r[ranking[k]] + k * gamma against the log-sum-exp
/// of r[ranking[j]] + j * gamma over j >= k.
/// Throws std::invalid_argument when `ranking` is not a permutation.
double pl_nll(std::span<const double> rewards, std::span<const std::size_t> ranking, double gamma);

/// d pl_nll / d reward, indexed like `rewards`.
std::vector<double> pl_nll_reward_grad(
  std::span<const double> rewards, std::span<const std::size_t> ranking, double gamma);

/// beta * log(prob). Throws std::invalid_argument for prob <= 0.
double simpo_reward(double scene_prob, double beta);

/// beta * log softmax(scene_logits), evaluated in the log domain.
std::vector<double> simpo_rewards(std::span<const double> scene_logits, double beta);

struct LossGradient
{
  double loss{0.0};
  std::vector<double> gradient;
};

/// pl_nll of the SimPO rewards and its exact gradient with respect to the scene logits.
LossGradient pl_nll_grad(
  std::span<const double> scene_logits, std::span<const std::size_t> ranking,
  const SimPOConfig & config);

struct DirectCostGradient
{
  double loss{0.0};
  /// [mode][agent][step] derivative of the loss with respect to each position.
  std::vector<std::vector<Trajectory>> d_positions;
};

/// Mean over modes of avgFDE_k + lambda * R_k, differentiated through both terms.
DirectCostGradient direct_cost_loss(
  const JointModeSet & joint, std::span<const Trajectory> ground_truth, double lambda,
  const RepellerParams & repeller);

}  // namespace trajpref

#endif  // TRAJPREF__LOSSES_HPP_

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

#include "trajpref/losses.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "trajpref/numerics.hpp"

namespace trajpref
{

namespace
{

void check_permutation(std::span<const std::size_t> ranking, std::size_t k)
{
  if (ranking.size() != k) {
    throw std::invalid_argument(
      "ranking has " + std::to_string(ranking.size()) + " entries for " + std::to_string(k) +
      " modes");
  }
  std::vector<bool> seen(k, false);
  for (std::size_t idx : ranking) {
    if (idx >= k || seen[idx]) {
      throw std::invalid_argument("ranking is not a permutation");
    }
    seen[idx] = true;
  }
}

/// Margin-shifted rewards in rank order: s[k] = r[ranking[k]] + (k + 1) * gamma.
std::vector<double> ranked_scores(
  std::span<const double> rewards, std::span<const std::size_t> ranking, double gamma)
{
  check_permutation(ranking, rewards.size());
  std::vector<double> s(rewards.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    s[k] = rewards[ranking[k]] + static_cast<double>(k + 1) * gamma;
  }
  return s;
}

}  // namespace

void SimPOConfig::validate() const
{
  if (!(beta > 0.0)) {
    throw std::invalid_argument("beta must be positive");
  }
  if (!(gamma >= 0.0)) {
    throw std::invalid_argument("gamma must be non-negative");
  }
}

double bt_nll(double reward_w, double reward_l, double gamma)
{
  return softplus(-(reward_w - reward_l - gamma));
}

double pl_nll(std::span<const double> rewards, std::span<const std::size_t> ranking, double gamma)
{
  const auto s = ranked_scores(rewards, ranking, gamma);
  double loss = 0.0;
  const std::span<const double> all(s);
  for (std::size_t k = 0; k < s.size(); ++k) {
    loss += log_sum_exp(all.subspan(k)) - s[k];
  }
  return loss;
}

std::vector<double> pl_nll_reward_grad(
  std::span<const double> rewards, std::span<const std::size_t> ranking, double gamma)
{
  const auto s = ranked_scores(rewards, ranking, gamma);
  const std::span<const double> all(s);
  // d/ds_j: -1 from its own numerator, plus the softmax weight of j in every
  // stage k <= j.
  std::vector<double> ds(s.size(), -1.0);
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double lse = log_sum_exp(all.subspan(k));
    for (std::size_t j = k; j < s.size(); ++j) {
      ds[j] += std::exp(s[j] - lse);
    }
  }
  std::vector<double> grad(rewards.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    grad[ranking[k]] = ds[k];
  }
  return grad;
}

double simpo_reward(double scene_prob, double beta)
{
  if (!(scene_prob > 0.0)) {
    throw std::invalid_argument("scene probability must be positive");
  }
  return beta * std::log(scene_prob);
}

std::vector<double> simpo_rewards(std::span<const double> scene_logits, double beta)
{
  auto r = log_softmax(scene_logits);
  for (double & v : r) {
    v *= beta;
  }
  return r;
}

LossGradient pl_nll_grad(
  std::span<const double> scene_logits, std::span<const std::size_t> ranking,
  const SimPOConfig & config)
{
  config.validate();
  const auto rewards = simpo_rewards(scene_logits, config.beta);
  LossGradient out;
  out.loss = pl_nll(rewards, ranking, config.gamma);
  const auto g_r = pl_nll_reward_grad(rewards, ranking, config.gamma);

  // r = beta * (z - lse(z)) => dL/dz_l = beta * (g_l - p_l * sum(g)).
  const auto p = softmax(scene_logits);
  double total = 0.0;
  for (double g : g_r) {
    total += g;
  }
  out.gradient.resize(scene_logits.size());
  for (std::size_t l = 0; l < scene_logits.size(); ++l) {
    out.gradient[l] = config.beta * (g_r[l] - p[l] * total);
  }
  return out;
}

DirectCostGradient direct_cost_loss(
  const JointModeSet & joint, std::span<const Trajectory> ground_truth, double lambda,
  const RepellerParams & repeller)
{
  const std::size_t k = joint.num_modes();
  if (k == 0) {
    throw std::invalid_argument("direct_cost_loss: no modes");
  }
  const double inv_k = 1.0 / static_cast<double>(k);
  DirectCostGradient out;
  out.d_positions.reserve(k);
  for (const auto & mode : joint.modes) {
    const auto & traj = mode.trajectories;
    if (traj.size() != ground_truth.size()) {
      throw std::invalid_argument("direct_cost_loss: agent count mismatch");
    }
    const double inv_a = 1.0 / static_cast<double>(traj.size());
    auto rep = repeller_cost_gradient(traj, repeller);
    double fde_sum = 0.0;
    auto & grad = rep.d_positions;
    for (auto & g_agent : grad) {
      for (auto & g : g_agent) {
        g = (lambda * inv_k) * g;
      }
    }
    for (std::size_t i = 0; i < traj.size(); ++i) {
      if (traj[i].size() != ground_truth[i].size() || traj[i].empty()) {
        throw std::invalid_argument("direct_cost_loss: trajectory length mismatch");
      }
      const Vec2 diff = final_point(traj[i]) - final_point(ground_truth[i]);
      const double d = diff.norm();
      fde_sum += d;
      if (d > 0.0) {
        grad[i].back() += (inv_a * inv_k / d) * diff;
      }
    }
    out.loss += inv_k * (fde_sum * inv_a + lambda * rep.cost);
    out.d_positions.push_back(std::move(grad));
  }
  return out;
}

}  // namespace trajpref

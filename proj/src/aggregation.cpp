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

#include "trajpref/aggregation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "trajpref/numerics.hpp"

namespace trajpref
{

namespace
{

std::vector<std::size_t> descending_order(const std::vector<double> & scores)
{
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&scores](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });
  return order;
}

}  // namespace

AgentModeOrder rank_marginal_modes(const MarginalPrediction & pred)
{
  AgentModeOrder order;
  order.reserve(pred.agents.size());
  for (const auto & a : pred.agents) {
    order.push_back(descending_order(a.logits));
  }
  return order;
}

JointModeSet aggregate_to_joint(const MarginalPrediction & pred)
{
  if (pred.agents.empty()) {
    throw std::invalid_argument("prediction has no agents");
  }
  const std::size_t k = pred.num_modes();
  for (std::size_t i = 0; i < pred.agents.size(); ++i) {
    const auto & a = pred.agents[i];
    if (a.logits.size() != k || a.trajectories.size() != k) {
      throw std::invalid_argument(
        "agent " + std::to_string(i) + " has " + std::to_string(a.logits.size()) +
        " modes, expected " + std::to_string(k));
    }
  }

  const auto order = rank_marginal_modes(pred);
  const double inv_agents = 1.0 / static_cast<double>(pred.agents.size());

  JointModeSet joint;
  joint.modes.resize(k);
  joint.scene_logits.assign(k, 0.0);
  for (std::size_t m = 0; m < k; ++m) {
    auto & mode = joint.modes[m];
    mode.trajectories.reserve(pred.agents.size());
    mode.source_modes.reserve(pred.agents.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.agents.size(); ++i) {
      const std::size_t src = order[i][m];
      mode.trajectories.push_back(pred.agents[i].trajectories[src]);
      mode.source_modes.push_back(src);
      sum += pred.agents[i].logits[src];
    }
    joint.scene_logits[m] = sum * inv_agents;
  }
  // Each agent's m-th logit is non-increasing in m, so the means already are.
  joint.scene_probs = softmax(joint.scene_logits);
  return joint;
}

JointModeSet select_top_modes(const JointModeSet & joint, std::size_t n)
{
  if (n < 1 || n > joint.num_modes()) {
    throw std::invalid_argument(
      "cannot select " + std::to_string(n) + " of " + std::to_string(joint.num_modes()) + " modes");
  }
  const auto order = descending_order(joint.scene_probs);
  JointModeSet out;
  out.modes.reserve(n);
  out.scene_logits.reserve(n);
  for (std::size_t m = 0; m < n; ++m) {
    out.modes.push_back(joint.modes[order[m]]);
    out.scene_logits.push_back(joint.scene_logits[order[m]]);
  }
  out.scene_probs = softmax(out.scene_logits);
  return out;
}

}  // namespace trajpref

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

#ifndef TRAJPREF__AGGREGATION_HPP_
#define TRAJPREF__AGGREGATION_HPP_

#include <cstddef>
#include <vector>

#include "trajpref/scene.hpp"

namespace trajpref
{

/// Per agent, marginal mode indices sorted by descending logit (ties by index).
using AgentModeOrder = std::vector<std::vector<std::size_t>>;

AgentModeOrder rank_marginal_modes(const MarginalPrediction & pred);

/// Pairs every agent's m-th most likely trajectory into joint mode m and scores
/// it with the mean of the paired logits. Probabilities are the softmax of the
/// scene logits. Throws std::invalid_argument when agents disagree on K.
///
/// For differentiation the pairing is a constant permutation: each scene logit
/// has derivative 1/A with respect to each logit it averages.
JointModeSet aggregate_to_joint(const MarginalPrediction & pred);

/// Keeps the n most probable modes (ties by index) and renormalizes their
/// probabilities, i.e. recomputes the softmax over the kept logits.
JointModeSet select_top_modes(const JointModeSet & joint, std::size_t n);

}  // namespace trajpref

#endif  // TRAJPREF__AGGREGATION_HPP_

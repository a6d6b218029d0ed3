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

#ifndef TRAJPREF__TRAINING_HPP_
#define TRAJPREF__TRAINING_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "trajpref/collision.hpp"
#include "trajpref/losses.hpp"
#include "trajpref/predictor.hpp"

namespace trajpref
{

enum class Objective { pretrain, simpo, direct_cost };

std::string to_string(Objective o);
Objective objective_from_string(const std::string & s);

enum class OptimizerKind { sgd, adam };

std::string to_string(OptimizerKind k);
OptimizerKind optimizer_from_string(const std::string & s);

/// Which tensors receive updates.
enum class Trainable { all, logit_head };

struct TrainConfig
{
  double learning_rate{1e-5};
  std::size_t epochs{5};
  std::size_t batch_size{1};
  Objective objective{Objective::simpo};
  OptimizerKind optimizer{OptimizerKind::sgd};
  double momentum{0.0};  ///< SGD only
  SimPOConfig simpo;
  double lambda{1e3};
  RepellerParams repeller;
  std::uint64_t rng_seed{0};
  Trainable trainable{Trainable::all};
  double wta_relax{0.0};  ///< pretraining only, see pretrain_loss
  std::size_t threads{1};  ///< per-scene gradients computed concurrently, reduced in order

  void validate() const;
};

/// First-order optimizer with per-tensor state.
class Optimizer
{
public:
  Optimizer(const TrainConfig & config, const PredictorParams & like);

  void step(PredictorParams & params, const PredictorParams & grads);

private:
  OptimizerKind kind_;
  double lr_;
  double momentum_;
  Trainable trainable_;
  std::size_t t_{0};
  PredictorParams m_;
  PredictorParams v_;
};

struct BatchStats
{
  double loss{0.0};
  /// Mean over scenes of r_tau(1) - r_tau(K) before the update (SimPO only).
  double reward_gap{0.0};
};

/// Winner-takes-all regression on the closest mode plus cross-entropy of the
/// logits against that mode, averaged over all agents of the batch. With
/// `relax` > 0 the winner's regression weight is 1 - relax and every other mode
/// gets relax / (K - 1). Adds the gradient into `grads` when given.
BatchStats pretrain_loss(
  const PredictorParams & params, std::span<const Scene * const> batch, PredictorParams * grads,
  std::size_t threads = 1, double relax = 0.0);

/// Mean over scenes of the ranked SimPO loss of the aggregated joint modes.
BatchStats simpo_loss(
  const PredictorParams & params, std::span<const Scene * const> batch, const TrainConfig & config,
  PredictorParams * grads);

/// Mean over scenes of the direct preference-cost objective.
BatchStats direct_cost_objective(
  const PredictorParams & params, std::span<const Scene * const> batch, const TrainConfig & config,
  PredictorParams * grads);

/// Loss and gradient for `config.objective`.
BatchStats objective_loss(
  const PredictorParams & params, std::span<const Scene * const> batch, const TrainConfig & config,
  PredictorParams * grads);

BatchStats pretrain_step(
  PredictorParams & params, Optimizer & opt, std::span<const Scene * const> batch,
  const TrainConfig & config);
BatchStats finetune_step(
  PredictorParams & params, Optimizer & opt, std::span<const Scene * const> batch,
  const TrainConfig & config);
BatchStats finetune_step_direct(
  PredictorParams & params, Optimizer & opt, std::span<const Scene * const> batch,
  const TrainConfig & config);

struct EpochStats
{
  std::size_t epoch{0};
  std::size_t steps{0};
  double mean_loss{0.0};
  double mean_reward_gap{0.0};
};

struct TrainHistory
{
  std::vector<EpochStats> epochs;
  std::size_t total_steps{0};
};

using EpochCallback = std::function<void(const EpochStats &)>;

/// Runs `config.epochs` passes over `scenes` with per-epoch seeded shuffling and
/// the objective selected by `config.objective`.
TrainHistory train(
  PredictorParams & params, std::span<const Scene> scenes, const TrainConfig & config,
  const EpochCallback & on_epoch = {});

}  // namespace trajpref

#endif  // TRAJPREF__TRAINING_HPP_

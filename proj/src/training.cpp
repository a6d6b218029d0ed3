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

#include "trajpref/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

#include "trajpref/aggregation.hpp"
#include "trajpref/numerics.hpp"
#include "trajpref/preference.hpp"

namespace trajpref
{

namespace
{

struct SceneResult
{
  double loss{0.0};
  double reward_gap{0.0};
};

/// Evaluates `fn` per scene, each into its own gradient buffer, and sums the
/// buffers in batch order so the result does not depend on `threads`.
template <class Fn>
BatchStats reduce_scenes(
  const PredictorParams & params, std::span<const Scene * const> batch, PredictorParams * grads,
  std::size_t threads, Fn && fn)
{
  const std::size_t n = batch.size();
  std::vector<SceneResult> results(n);
  BatchStats stats;
  if (threads <= 1 || n <= 1) {
    PredictorParams scene_grad;
    if (grads) {
      scene_grad = PredictorParams::zeros(params.dims);
    }
    for (std::size_t s = 0; s < n; ++s) {
      if (grads) {
        scene_grad.set_zero();
      }
      results[s] = fn(*batch[s], grads ? &scene_grad : nullptr);
      if (grads) {
        *grads += scene_grad;
      }
    }
  } else {
    std::vector<PredictorParams> scene_grads;
    if (grads) {
      scene_grads.assign(n, PredictorParams::zeros(params.dims));
    }
    const std::size_t workers = std::min(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t s = w; s < n; s += workers) {
          results[s] = fn(*batch[s], grads ? &scene_grads[s] : nullptr);
        }
      });
    }
    for (auto & t : pool) {
      t.join();
    }
    if (grads) {
      for (const auto & g : scene_grads) {
        *grads += g;
      }
    }
  }
  for (const auto & r : results) {
    stats.loss += r.loss;
    stats.reward_gap += r.reward_gap;
  }
  return stats;
}

std::vector<std::size_t> wta_winners(const MarginalPrediction & pred, const Scene & scene)
{
  std::vector<std::size_t> winners(pred.agents.size());
  for (std::size_t i = 0; i < pred.agents.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    const auto & gt = scene.ground_truth_futures[i];
    for (std::size_t m = 0; m < pred.agents[i].trajectories.size(); ++m) {
      const auto & traj = pred.agents[i].trajectories[m];
      double err = 0.0;
      for (std::size_t t = 0; t < gt.size(); ++t) {
        const Vec2 d = traj[t] - gt[t];
        err += d.dot(d);
      }
      if (err < best) {
        best = err;
        winners[i] = m;
      }
    }
  }
  return winners;
}

void check_horizon(const PredictorParams & params, const Scene & scene)
{
  if (scene.horizon != params.dims.fut_steps || scene.ground_truth_futures.size() != scene.num_agents()) {
    throw std::invalid_argument(
      "scene " + scene.scene_id + ": horizon does not match the predictor");
  }
}

}  // namespace

std::string to_string(Objective o)
{
  switch (o) {
    case Objective::pretrain:
      return "pretrain";
    case Objective::simpo:
      return "simpo";
    case Objective::direct_cost:
      return "direct-cost";
  }
  return "unknown";
}

Objective objective_from_string(const std::string & s)
{
  if (s == "pretrain") {
    return Objective::pretrain;
  }
  if (s == "simpo") {
    return Objective::simpo;
  }
  if (s == "direct-cost") {
    return Objective::direct_cost;
  }
  throw std::invalid_argument("unknown objective '" + s + "' (pretrain | simpo | direct-cost)");
}

std::string to_string(OptimizerKind k) { return k == OptimizerKind::sgd ? "sgd" : "adam"; }

OptimizerKind optimizer_from_string(const std::string & s)
{
  if (s == "sgd") {
    return OptimizerKind::sgd;
  }
  if (s == "adam") {
    return OptimizerKind::adam;
  }
  throw std::invalid_argument("unknown optimizer '" + s + "' (sgd | adam)");
}

void TrainConfig::validate() const
{
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("learning rate must be positive");
  }
  if (epochs < 1) {
    throw std::invalid_argument("epochs must be at least 1");
  }
  if (batch_size < 1) {
    throw std::invalid_argument("batch size must be at least 1");
  }
  if (!(momentum >= 0.0 && momentum < 1.0)) {
    throw std::invalid_argument("momentum must lie in [0, 1)");
  }
  if (!(wta_relax >= 0.0 && wta_relax < 1.0)) {
    throw std::invalid_argument("winner relaxation must lie in [0, 1)");
  }
  simpo.validate();
  repeller.validate();
}

Optimizer::Optimizer(const TrainConfig & config, const PredictorParams & like)
: kind_(config.optimizer),
  lr_(config.learning_rate),
  momentum_(config.momentum),
  trainable_(config.trainable),
  m_(PredictorParams::zeros(like.dims)),
  v_(PredictorParams::zeros(like.dims))
{
}

void Optimizer::step(PredictorParams & params, const PredictorParams & grads)
{
  ++t_;
  constexpr double kBeta1 = 0.9;
  constexpr double kBeta2 = 0.999;
  constexpr double kEps = 1e-8;
  const double bias1 = 1.0 - std::pow(kBeta1, static_cast<double>(t_));
  const double bias2 = 1.0 - std::pow(kBeta2, static_cast<double>(t_));

  // Visit params, gradients and both state buffers tensor by tensor.
  std::vector<Eigen::MatrixXd *> p, m, v;
  std::vector<const Eigen::MatrixXd *> g;
  std::vector<bool> active;
  params.for_each_tensor([&](const char * name, Eigen::MatrixXd & t) {
    p.push_back(&t);
    const std::string n = name;
    active.push_back(trainable_ == Trainable::all || n.rfind("logit_", 0) == 0);
  });
  grads.for_each_tensor([&](const char *, const Eigen::MatrixXd & t) { g.push_back(&t); });
  m_.for_each_tensor([&](const char *, Eigen::MatrixXd & t) { m.push_back(&t); });
  v_.for_each_tensor([&](const char *, Eigen::MatrixXd & t) { v.push_back(&t); });

  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!active[i]) {
      continue;
    }
    if (kind_ == OptimizerKind::sgd) {
      if (momentum_ > 0.0) {
        *m[i] = momentum_ * *m[i] + *g[i];
        *p[i] -= lr_ * *m[i];
      } else {
        *p[i] -= lr_ * *g[i];
      }
    } else {
      *m[i] = kBeta1 * *m[i] + (1.0 - kBeta1) * *g[i];
      *v[i] = kBeta2 * *v[i] + (1.0 - kBeta2) * g[i]->cwiseProduct(*g[i]);
      p[i]->array() -=
        lr_ * (m[i]->array() / bias1) / ((v[i]->array() / bias2).sqrt() + kEps);
    }
  }
}

BatchStats pretrain_loss(
  const PredictorParams & params, std::span<const Scene * const> batch, PredictorParams * grads,
  std::size_t threads, double relax)
{
  if (!(relax >= 0.0 && relax < 1.0)) {
    throw std::invalid_argument("winner relaxation must lie in [0, 1)");
  }
  if (params.dims.modes == 1) {
    relax = 0.0;
  }
  std::size_t total_agents = 0;
  for (const Scene * s : batch) {
    check_horizon(params, *s);
    total_agents += s->num_agents();
  }
  if (total_agents == 0) {
    throw std::invalid_argument("pretrain batch is empty");
  }
  const double inv_n = 1.0 / static_cast<double>(total_agents);
  const double inv_t = 1.0 / static_cast<double>(params.dims.fut_steps);

  return reduce_scenes(params, batch, grads, threads, [&](const Scene & scene, PredictorParams * g) {
    ForwardCache cache;
    const auto pred = forward(params, scene, g ? &cache : nullptr);
    const auto winners = wta_winners(pred, scene);
    auto upstream = g ? PredictionGradient::zeros(pred) : PredictionGradient{};
    SceneResult r;
    for (std::size_t i = 0; i < pred.agents.size(); ++i) {
      const auto & gt = scene.ground_truth_futures[i];
      const std::size_t k = pred.agents[i].trajectories.size();
      double reg = 0.0;
      for (std::size_t m = 0; m < k; ++m) {
        const double w = m == winners[i] ? 1.0 - relax : relax / static_cast<double>(k - 1);
        if (w == 0.0) {
          continue;
        }
        const auto & traj = pred.agents[i].trajectories[m];
        for (std::size_t t = 0; t < gt.size(); ++t) {
          const Vec2 d = traj[t] - gt[t];
          reg += w * d.dot(d);
          if (g) {
            upstream.d_trajectories[i][m][t] = (2.0 * w * inv_t * inv_n) * d;
          }
        }
      }
      const auto logp = log_softmax(pred.agents[i].logits);
      r.loss += inv_n * (reg * inv_t - logp[winners[i]]);
      if (g) {
        for (std::size_t m = 0; m < logp.size(); ++m) {
          upstream.d_logits[i][m] = inv_n * (std::exp(logp[m]) - (m == winners[i] ? 1.0 : 0.0));
        }
      }
    }
    if (g) {
      backward(params, cache, upstream, *g);
    }
    return r;
  });
}

BatchStats simpo_loss(
  const PredictorParams & params, std::span<const Scene * const> batch, const TrainConfig & config,
  PredictorParams * grads)
{
  if (batch.empty()) {
    throw std::invalid_argument("fine-tuning batch is empty");
  }
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  auto stats = reduce_scenes(params, batch, grads, config.threads, [&](const Scene & scene, PredictorParams * g) {
    check_horizon(params, scene);
    ForwardCache cache;
    const auto pred = forward(params, scene, g ? &cache : nullptr);
    const auto joint = aggregate_to_joint(pred);
    const auto rec = preference_cost(joint, scene.ground_truth_futures, config.lambda, config.repeller);
    const auto lg = pl_nll_grad(joint.scene_logits, rec.ranking, config.simpo);
    const auto rewards = simpo_rewards(joint.scene_logits, config.simpo.beta);

    SceneResult r;
    r.loss = inv_b * lg.loss;
    r.reward_gap = rewards[rec.ranking.front()] - rewards[rec.ranking.back()];
    if (g) {
      auto upstream = PredictionGradient::zeros(pred);
      const double inv_a = 1.0 / static_cast<double>(pred.agents.size());
      for (std::size_t m = 0; m < joint.num_modes(); ++m) {
        for (std::size_t a = 0; a < pred.agents.size(); ++a) {
          upstream.d_logits[a][joint.modes[m].source_modes[a]] += inv_b * inv_a * lg.gradient[m];
        }
      }
      backward(params, cache, upstream, *g);
    }
    return r;
  });
  stats.reward_gap *= inv_b;
  return stats;
}

BatchStats direct_cost_objective(
  const PredictorParams & params, std::span<const Scene * const> batch, const TrainConfig & config,
  PredictorParams * grads)
{
  if (batch.empty()) {
    throw std::invalid_argument("fine-tuning batch is empty");
  }
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  return reduce_scenes(params, batch, grads, config.threads, [&](const Scene & scene, PredictorParams * g) {
    check_horizon(params, scene);
    ForwardCache cache;
    const auto pred = forward(params, scene, g ? &cache : nullptr);
    const auto joint = aggregate_to_joint(pred);
    const auto dc = direct_cost_loss(joint, scene.ground_truth_futures, config.lambda, config.repeller);
    SceneResult r;
    r.loss = inv_b * dc.loss;
    if (g) {
      auto upstream = PredictionGradient::zeros(pred);
      for (std::size_t m = 0; m < joint.num_modes(); ++m) {
        for (std::size_t a = 0; a < pred.agents.size(); ++a) {
          auto & dst = upstream.d_trajectories[a][joint.modes[m].source_modes[a]];
          const auto & src = dc.d_positions[m][a];
          for (std::size_t t = 0; t < dst.size(); ++t) {
            dst[t] += inv_b * src[t];
          }
        }
      }
      backward(params, cache, upstream, *g);
    }
    return r;
  });
}

BatchStats objective_loss(
  const PredictorParams & params, std::span<const Scene * const> batch, const TrainConfig & config,
  PredictorParams * grads)
{
  switch (config.objective) {
    case Objective::pretrain:
      return pretrain_loss(params, batch, grads, config.threads, config.wta_relax);
    case Objective::simpo:
      return simpo_loss(params, batch, config, grads);
    case Objective::direct_cost:
      return direct_cost_objective(params, batch, config, grads);
  }
  throw std::logic_error("unhandled objective");
}

namespace
{

BatchStats apply_step(
  PredictorParams & params, Optimizer & opt, std::span<const Scene * const> batch,
  TrainConfig config, Objective objective)
{
  config.objective = objective;
  auto grads = PredictorParams::zeros(params.dims);
  const auto stats = objective_loss(params, batch, config, &grads);
  opt.step(params, grads);
  return stats;
}

}  // namespace

BatchStats pretrain_step(
  PredictorParams & params, Optimizer & opt, std::span<const Scene * const> batch,
  const TrainConfig & config)
{
  return apply_step(params, opt, batch, config, Objective::pretrain);
}

BatchStats finetune_step(
  PredictorParams & params, Optimizer & opt, std::span<const Scene * const> batch,
  const TrainConfig & config)
{
  return apply_step(params, opt, batch, config, Objective::simpo);
}

BatchStats finetune_step_direct(
  PredictorParams & params, Optimizer & opt, std::span<const Scene * const> batch,
  const TrainConfig & config)
{
  return apply_step(params, opt, batch, config, Objective::direct_cost);
}

TrainHistory train(
  PredictorParams & params, std::span<const Scene> scenes, const TrainConfig & config,
  const EpochCallback & on_epoch)
{
  config.validate();
  if (scenes.empty()) {
    throw std::invalid_argument("no training scenes");
  }
  Optimizer opt(config, params);
  TrainHistory history;
  std::vector<std::size_t> order(scenes.size());
  std::vector<const Scene *> batch;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(config.rng_seed * 0x9E3779B97F4A7C15ULL + epoch);
    std::shuffle(order.begin(), order.end(), rng);

    EpochStats es;
    es.epoch = epoch;
    double gap_sum = 0.0;
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      batch.clear();
      for (std::size_t i = start; i < std::min(order.size(), start + config.batch_size); ++i) {
        batch.push_back(&scenes[order[i]]);
      }
      const auto stats = apply_step(params, opt, batch, config, config.objective);
      loss_sum += stats.loss * static_cast<double>(batch.size());
      gap_sum += stats.reward_gap * static_cast<double>(batch.size());
      ++es.steps;
    }
    es.mean_loss = loss_sum / static_cast<double>(order.size());
    es.mean_reward_gap = gap_sum / static_cast<double>(order.size());
    history.total_steps += es.steps;
    history.epochs.push_back(es);
    if (on_epoch) {
      on_epoch(es);
    }
  }
  return history;
}

}  // namespace trajpref

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

#include "trajpref/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace trajpref
{

namespace
{

constexpr double kPositionScale = 10.0;  // m
constexpr double kVelocityScale = 10.0;  // m/s
constexpr double kOffsetScale = 5.0;     // m, offset magnitude at the final step
constexpr double kCueHorizon = 3.0;      // s

struct Frame
{
  Vec2 origin;
  double c{1.0};
  double s{0.0};

  /// Scene-frame vector into the agent frame.
  Vec2 to_local(const Vec2 & v) const { return {c * v.x + s * v.y, -s * v.x + c * v.y}; }
  Vec2 to_scene(const Vec2 & v) const { return {c * v.x - s * v.y, s * v.x + c * v.y}; }
};

Frame agent_frame(const AgentTrack & track)
{
  const double yaw = track.past_yaws.back();
  return {track.past_positions.back(), std::cos(yaw), std::sin(yaw)};
}

Eigen::VectorXd history_features(const AgentTrack & track, const Frame & f)
{
  const std::size_t n = track.obs_steps();
  Eigen::VectorXd x(6 * n);
  const double yaw = track.past_yaws.back();
  for (std::size_t t = 0; t < n; ++t) {
    const Vec2 p = f.to_local(track.past_positions[t] - f.origin);
    const Vec2 v = f.to_local(track.past_velocities[t]);
    x[2 * t] = p.x / kPositionScale;
    x[2 * t + 1] = p.y / kPositionScale;
    x[2 * n + 2 * t] = v.x / kVelocityScale;
    x[2 * n + 2 * t + 1] = v.y / kVelocityScale;
    x[4 * n + 2 * t] = std::cos(track.past_yaws[t] - yaw);
    x[4 * n + 2 * t + 1] = std::sin(track.past_yaws[t] - yaw);
  }
  return x;
}

/// Other agent's past positions, current velocity and relative heading, in the
/// frame of the agent being predicted, followed by constant-velocity interaction
/// cues: closest approach and who reaches the crossing point of the two headings
/// first.
Eigen::VectorXd pair_features(const AgentTrack & self, const Frame & f, const AgentTrack & other)
{
  const std::size_t n = other.obs_steps();
  Eigen::VectorXd u(2 * n + 9);
  for (std::size_t t = 0; t < n; ++t) {
    const Vec2 p = f.to_local(other.past_positions[t] - f.origin);
    u[2 * t] = p.x / kPositionScale;
    u[2 * t + 1] = p.y / kPositionScale;
  }
  const Vec2 v = f.to_local(other.past_velocities.back());
  u[2 * n] = v.x / kVelocityScale;
  u[2 * n + 1] = v.y / kVelocityScale;
  const double dyaw = other.past_yaws.back() - self.past_yaws.back();
  u[2 * n + 2] = std::cos(dyaw);
  u[2 * n + 3] = std::sin(dyaw);

  const Vec2 v_self = f.to_local(self.past_velocities.back());
  const Vec2 p_rel = f.to_local(other.past_positions.back() - f.origin);
  const Vec2 v_rel = v - v_self;
  const double vv = v_rel.dot(v_rel);
  const double t_cpa = vv > 1e-9 ? std::clamp(-p_rel.dot(v_rel) / vv, 0.0, kCueHorizon) : 0.0;
  u[2 * n + 4] = t_cpa / kCueHorizon;
  u[2 * n + 5] = std::min((p_rel + t_cpa * v_rel).norm(), 2.0 * kPositionScale) / kPositionScale;

  // Times a, b at which self and other reach the intersection of their headings.
  const double cross = v_self.x * v.y - v_self.y * v.x;
  double has_conflict = 0.0, lead = 0.0, eta = 0.0;
  if (std::abs(cross) > 1e-6) {
    const double a = (p_rel.x * v.y - p_rel.y * v.x) / cross;
    const double b = (p_rel.x * v_self.y - p_rel.y * v_self.x) / cross;
    if (a >= 0.0 && b >= 0.0) {
      has_conflict = 1.0;
      lead = std::tanh(b - a);
      eta = std::tanh(a / kCueHorizon);
    }
  }
  u[2 * n + 6] = has_conflict;
  u[2 * n + 7] = lead;
  u[2 * n + 8] = eta;
  return u;
}

/// Offset magnitude grows linearly over the horizon.
double offset_gain(std::size_t t, std::size_t steps)
{
  return kOffsetScale * static_cast<double>(t + 1) / static_cast<double>(steps);
}

void fill_uniform(Eigen::MatrixXd & m, std::size_t fan_in, std::mt19937_64 & rng)
{
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      m(r, c) = dist(rng);
    }
  }
}

}  // namespace

void PredictorDims::validate() const
{
  if (obs_steps < 1 || fut_steps < 1 || hidden < 1 || modes < 1) {
    throw std::invalid_argument("predictor dimensions must be positive");
  }
  if (!(dt > 0.0)) {
    throw std::invalid_argument("dt must be positive");
  }
}

PredictorParams PredictorParams::zeros(const PredictorDims & dims)
{
  dims.validate();
  const auto h = static_cast<Eigen::Index>(dims.hidden);
  const auto ctx = static_cast<Eigen::Index>(dims.context());
  PredictorParams p;
  p.dims = dims;
  p.enc1_w = Eigen::MatrixXd::Zero(h, static_cast<Eigen::Index>(dims.history_features()));
  p.enc1_b = Eigen::MatrixXd::Zero(h, 1);
  p.enc2_w = Eigen::MatrixXd::Zero(h, h);
  p.enc2_b = Eigen::MatrixXd::Zero(h, 1);
  p.social_w = Eigen::MatrixXd::Zero(h, static_cast<Eigen::Index>(dims.pair_features()));
  p.social_b = Eigen::MatrixXd::Zero(h, 1);
  p.traj_w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dims.head_outputs()), ctx);
  p.traj_b = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dims.head_outputs()), 1);
  p.logit_w = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dims.modes), ctx);
  p.logit_b = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dims.modes), 1);
  return p;
}

PredictorParams PredictorParams::initialize(const PredictorDims & dims, std::uint64_t seed)
{
  PredictorParams p = zeros(dims);
  p.seed = seed;
  std::mt19937_64 rng(seed);
  fill_uniform(p.enc1_w, dims.history_features(), rng);
  fill_uniform(p.enc1_b, dims.history_features(), rng);
  fill_uniform(p.enc2_w, dims.hidden, rng);
  fill_uniform(p.enc2_b, dims.hidden, rng);
  fill_uniform(p.social_w, dims.pair_features(), rng);
  fill_uniform(p.social_b, dims.pair_features(), rng);
  fill_uniform(p.traj_w, dims.context(), rng);
  fill_uniform(p.traj_b, dims.context(), rng);
  fill_uniform(p.logit_w, dims.context(), rng);
  fill_uniform(p.logit_b, dims.context(), rng);
  return p;
}

std::size_t PredictorParams::parameter_count() const
{
  std::size_t n = 0;
  for_each_tensor([&n](const char *, const Eigen::MatrixXd & m) { n += static_cast<std::size_t>(m.size()); });
  return n;
}

void PredictorParams::set_zero()
{
  for_each_tensor([](const char *, Eigen::MatrixXd & m) { m.setZero(); });
}

PredictorParams & PredictorParams::operator+=(const PredictorParams & other)
{
  enc1_w += other.enc1_w;
  enc1_b += other.enc1_b;
  enc2_w += other.enc2_w;
  enc2_b += other.enc2_b;
  social_w += other.social_w;
  social_b += other.social_b;
  traj_w += other.traj_w;
  traj_b += other.traj_b;
  logit_w += other.logit_w;
  logit_b += other.logit_b;
  return *this;
}

PredictorParams & PredictorParams::operator*=(double s)
{
  for_each_tensor([s](const char *, Eigen::MatrixXd & m) { m *= s; });
  return *this;
}

bool operator==(const PredictorParams & a, const PredictorParams & b)
{
  return a.dims == b.dims && a.seed == b.seed && a.enc1_w == b.enc1_w && a.enc1_b == b.enc1_b &&
         a.enc2_w == b.enc2_w && a.enc2_b == b.enc2_b && a.social_w == b.social_w &&
         a.social_b == b.social_b && a.traj_w == b.traj_w && a.traj_b == b.traj_b &&
         a.logit_w == b.logit_w && a.logit_b == b.logit_b;
}

PredictionGradient PredictionGradient::zeros(const MarginalPrediction & like)
{
  PredictionGradient g;
  for (const auto & a : like.agents) {
    std::vector<Trajectory> trajs;
    trajs.reserve(a.trajectories.size());
    for (const auto & t : a.trajectories) {
      trajs.emplace_back(t.size());
    }
    g.d_trajectories.push_back(std::move(trajs));
    g.d_logits.emplace_back(a.logits.size(), 0.0);
  }
  return g;
}

Trajectory constant_velocity_anchor(const AgentTrack & track, std::size_t fut_steps, double dt)
{
  Trajectory out(fut_steps);
  const Vec2 p0 = track.past_positions.back();
  const Vec2 v0 = track.past_velocities.back();
  for (std::size_t t = 0; t < fut_steps; ++t) {
    out[t] = p0 + (static_cast<double>(t + 1) * dt) * v0;
  }
  return out;
}

MarginalPrediction forward(const PredictorParams & params, const Scene & scene, ForwardCache * cache)
{
  const auto & dims = params.dims;
  if (scene.agents.empty()) {
    throw std::invalid_argument("scene " + scene.scene_id + " has no agents");
  }
  if (scene.obs_steps() != dims.obs_steps) {
    throw std::invalid_argument(
      "scene " + scene.scene_id + ": T_obs " + std::to_string(scene.obs_steps()) +
      " does not match the predictor (" + std::to_string(dims.obs_steps) + ")");
  }
  for (const auto & a : scene.agents) {
    if (a.obs_steps() != dims.obs_steps || a.past_velocities.size() != dims.obs_steps ||
        a.past_yaws.size() != dims.obs_steps)
    {
      throw std::invalid_argument("scene " + scene.scene_id + ": inconsistent past track length");
    }
  }

  const std::size_t n_agents = scene.agents.size();
  const std::size_t k = dims.modes;
  const std::size_t steps = dims.fut_steps;
  const auto h = static_cast<Eigen::Index>(dims.hidden);

  MarginalPrediction pred;
  pred.agents.resize(n_agents);
  if (cache) {
    cache->agents.assign(n_agents, {});
  }

  for (std::size_t i = 0; i < n_agents; ++i) {
    const auto & track = scene.agents[i];
    const Frame frame = agent_frame(track);

    Eigen::VectorXd x = history_features(track, frame);
    Eigen::VectorXd h1 = (params.enc1_w * x + params.enc1_b.col(0)).array().tanh().matrix();
    Eigen::VectorXd h2 = (params.enc2_w * h1 + params.enc2_b.col(0)).array().tanh().matrix();

    Eigen::MatrixXd pair_in(static_cast<Eigen::Index>(dims.pair_features()), static_cast<Eigen::Index>(n_agents - 1));
    for (std::size_t j = 0, col = 0; j < n_agents; ++j) {
      if (j != i) {
        pair_in.col(static_cast<Eigen::Index>(col++)) = pair_features(track, frame, scene.agents[j]);
      }
    }
    Eigen::MatrixXd pair_act =
      ((params.social_w * pair_in).colwise() + params.social_b.col(0)).array().tanh().matrix();
    Eigen::VectorXd social = Eigen::VectorXd::Zero(h);
    if (n_agents > 1) {
      social = pair_act.rowwise().mean();
    }

    Eigen::VectorXd context(2 * h);
    context << h2, social;
    const Eigen::VectorXd raw = params.traj_w * context + params.traj_b.col(0);
    const Eigen::VectorXd logits = params.logit_w * context + params.logit_b.col(0);

    const Trajectory anchor = constant_velocity_anchor(track, steps, dims.dt);
    auto & out = pred.agents[i];
    out.trajectories.assign(k, anchor);
    out.logits.assign(logits.data(), logits.data() + logits.size());
    for (std::size_t m = 0; m < k; ++m) {
      for (std::size_t t = 0; t < steps; ++t) {
        const std::size_t r = 2 * (m * steps + t);
        const double g = offset_gain(t, steps);
        out.trajectories[m][t] += frame.to_scene({g * raw[static_cast<Eigen::Index>(r)], g * raw[static_cast<Eigen::Index>(r + 1)]});
      }
    }

    if (cache) {
      auto & c = cache->agents[i];
      c.input = std::move(x);
      c.h1 = std::move(h1);
      c.h2 = std::move(h2);
      c.social = std::move(social);
      c.context = std::move(context);
      c.pair_inputs = std::move(pair_in);
      c.pair_act = std::move(pair_act);
      c.cos_yaw = frame.c;
      c.sin_yaw = frame.s;
    }
  }
  return pred;
}

void backward(
  const PredictorParams & params, const ForwardCache & cache, const PredictionGradient & upstream,
  PredictorParams & grads)
{
  const auto & dims = params.dims;
  const std::size_t k = dims.modes;
  const std::size_t steps = dims.fut_steps;
  const auto h = static_cast<Eigen::Index>(dims.hidden);
  const std::size_t n_agents = cache.agents.size();

  Eigen::VectorXd d_raw(static_cast<Eigen::Index>(dims.head_outputs()));
  Eigen::VectorXd d_logits(static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < n_agents; ++i) {
    const auto & c = cache.agents[i];
    const Frame frame{{}, c.cos_yaw, c.sin_yaw};

    for (std::size_t m = 0; m < k; ++m) {
      for (std::size_t t = 0; t < steps; ++t) {
        const std::size_t r = 2 * (m * steps + t);
        const Vec2 local = frame.to_local(upstream.d_trajectories[i][m][t]);
        const double g = offset_gain(t, steps);
        d_raw[static_cast<Eigen::Index>(r)] = g * local.x;
        d_raw[static_cast<Eigen::Index>(r + 1)] = g * local.y;
      }
      d_logits[static_cast<Eigen::Index>(m)] = upstream.d_logits[i][m];
    }

    const bool traj_active = d_raw.any();
    const bool logit_active = d_logits.any();
    Eigen::VectorXd d_context = Eigen::VectorXd::Zero(2 * h);
    if (traj_active) {
      grads.traj_w.noalias() += d_raw * c.context.transpose();
      grads.traj_b.col(0) += d_raw;
      d_context.noalias() += params.traj_w.transpose() * d_raw;
    }
    if (logit_active) {
      grads.logit_w.noalias() += d_logits * c.context.transpose();
      grads.logit_b.col(0) += d_logits;
      d_context.noalias() += params.logit_w.transpose() * d_logits;
    }
    if (!traj_active && !logit_active) {
      continue;
    }

    const Eigen::VectorXd d_a2 =
      d_context.head(h).array() * (1.0 - c.h2.array().square());
    grads.enc2_w.noalias() += d_a2 * c.h1.transpose();
    grads.enc2_b.col(0) += d_a2;
    const Eigen::VectorXd d_a1 =
      (params.enc2_w.transpose() * d_a2).array() * (1.0 - c.h1.array().square());
    grads.enc1_w.noalias() += d_a1 * c.input.transpose();
    grads.enc1_b.col(0) += d_a1;

    if (n_agents > 1) {
      const Eigen::VectorXd d_social = d_context.tail(h) / static_cast<double>(n_agents - 1);
      const Eigen::MatrixXd d_pre =
        (1.0 - c.pair_act.array().square()).colwise() * d_social.array();
      grads.social_w.noalias() += d_pre * c.pair_inputs.transpose();
      grads.social_b.col(0) += d_pre.rowwise().sum();
    }
  }
}

}  // namespace trajpref

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

#ifndef TRAJPREF__PREDICTOR_HPP_
#define TRAJPREF__PREDICTOR_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "trajpref/scene.hpp"

namespace trajpref
{

struct PredictorDims
{
  std::size_t obs_steps{10};
  std::size_t fut_steps{30};
  std::size_t hidden{64};
  std::size_t modes{6};
  double dt{0.1};

  std::size_t history_features() const { return 6 * obs_steps; }
  std::size_t pair_features() const { return 2 * obs_steps + 9; }
  std::size_t context() const { return 2 * hidden; }
  std::size_t head_outputs() const { return modes * fut_steps * 2; }

  void validate() const;
  friend bool operator==(const PredictorDims &, const PredictorDims &) = default;
};

/// Weights of the marginal predictor: a two-layer tanh history encoder, a tanh
/// projection of pairwise social features mean-pooled over the other agents,
/// and linear trajectory/logit heads over the concatenated context.
///
/// Trajectories are constant-velocity rollouts plus head offsets expressed in the
/// agent frame (origin at the last observed position, x along the last yaw), so
/// the network is invariant to translating and rotating the scene.
struct PredictorParams
{
  PredictorDims dims;
  std::uint64_t seed{0};

  Eigen::MatrixXd enc1_w, enc1_b;
  Eigen::MatrixXd enc2_w, enc2_b;
  Eigen::MatrixXd social_w, social_b;
  Eigen::MatrixXd traj_w, traj_b;
  Eigen::MatrixXd logit_w, logit_b;

  /// Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)] from a seeded generator.
  static PredictorParams initialize(const PredictorDims & dims, std::uint64_t seed);
  /// Same shapes, every entry zero.
  static PredictorParams zeros(const PredictorDims & dims);

  std::size_t parameter_count() const;

  template <class Fn>
  void for_each_tensor(Fn && fn)
  {
    visit(*this, fn);
  }

  template <class Fn>
  void for_each_tensor(Fn && fn) const
  {
    visit(*this, fn);
  }

  void set_zero();
  PredictorParams & operator+=(const PredictorParams & other);
  PredictorParams & operator*=(double s);

  friend bool operator==(const PredictorParams & a, const PredictorParams & b);

private:
  template <class Self, class Fn>
  static void visit(Self & self, Fn & fn)
  {
    fn("enc1_w", self.enc1_w);
    fn("enc1_b", self.enc1_b);
    fn("enc2_w", self.enc2_w);
    fn("enc2_b", self.enc2_b);
    fn("social_w", self.social_w);
    fn("social_b", self.social_b);
    fn("traj_w", self.traj_w);
    fn("traj_b", self.traj_b);
    fn("logit_w", self.logit_w);
    fn("logit_b", self.logit_b);
  }
};

/// Activations kept by `forward` for the backward pass.
struct ForwardCache
{
  struct Agent
  {
    Eigen::VectorXd input, h1, h2, social, context;
    Eigen::MatrixXd pair_inputs;  ///< one column per other agent
    Eigen::MatrixXd pair_act;
    double cos_yaw{1.0};
    double sin_yaw{0.0};
  };
  std::vector<Agent> agents;
};

/// Gradient of a scalar loss with respect to the predictor outputs.
struct PredictionGradient
{
  /// [agent][mode][step], scene frame.
  std::vector<std::vector<Trajectory>> d_trajectories;
  /// [agent][mode]
  std::vector<std::vector<double>> d_logits;

  static PredictionGradient zeros(const MarginalPrediction & like);
};

/// Throws std::invalid_argument when the scene does not match `params.dims`.
MarginalPrediction forward(const PredictorParams & params, const Scene & scene, ForwardCache * cache = nullptr);

/// Accumulates d loss / d params into `grads`.
void backward(
  const PredictorParams & params, const ForwardCache & cache, const PredictionGradient & upstream,
  PredictorParams & grads);

/// Rollout of the last observed velocity from the last observed position.
Trajectory constant_velocity_anchor(const AgentTrack & track, std::size_t fut_steps, double dt);

}  // namespace trajpref

#endif  // TRAJPREF__PREDICTOR_HPP_

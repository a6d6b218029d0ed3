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

#include <doctest.h>

#include <filesystem>

#include "trajpref/checkpoint.hpp"
#include "trajpref/errors.hpp"
#include "trajpref/predictor.hpp"
#include "trajpref/scenegen.hpp"
#include "unit/fixtures.hpp"

using namespace trajpref;

namespace
{

PredictorDims small_dims(std::size_t modes = 3)
{
  PredictorDims d;
  d.obs_steps = 10;
  d.fut_steps = 30;
  d.hidden = 8;
  d.modes = modes;
  return d;
}

Scene sample_scene(std::uint64_t seed = 1)
{
  ScenarioSpec spec;
  spec.num_agents = 3;
  spec.noise_std = 0.05;
  return generate_scene(spec, seed);
}

}  // namespace

TEST_CASE("a zero network predicts the constant-velocity rollout with zero logits")
{
  const auto params = PredictorParams::zeros(small_dims());
  const Scene scene = sample_scene();
  const auto pred = forward(params, scene);
  for (std::size_t a = 0; a < scene.agents.size(); ++a) {
    const auto anchor = constant_velocity_anchor(scene.agents[a], 30, 0.1);
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(pred.agents[a].trajectories[k] == anchor);
      CHECK(pred.agents[a].logits[k] == 0.0);
    }
  }
}

TEST_CASE("the forward pass is deterministic")
{
  const auto params = PredictorParams::initialize(small_dims(), 5);
  const Scene scene = sample_scene();
  const auto a = forward(params, scene);
  const auto b = forward(params, scene);
  for (std::size_t i = 0; i < a.agents.size(); ++i) {
    CHECK(a.agents[i].logits == b.agents[i].logits);
    CHECK(a.agents[i].trajectories == b.agents[i].trajectories);
  }
  CHECK(PredictorParams::initialize(small_dims(), 5) == params);
  CHECK_FALSE(PredictorParams::initialize(small_dims(), 6) == params);
}

TEST_CASE("translating a scene leaves offsets and logits unchanged")
{
  const auto params = PredictorParams::initialize(small_dims(), 7);
  const Scene scene = sample_scene(3);
  Scene moved = scene;
  const Vec2 c{123.5, -48.25};
  for (auto & a : moved.agents) {
    for (auto & p : a.past_positions) {
      p += c;
    }
  }
  for (auto & f : moved.ground_truth_futures) {
    for (auto & p : f) {
      p += c;
    }
  }
  const auto a = forward(params, scene);
  const auto b = forward(params, moved);
  for (std::size_t i = 0; i < scene.agents.size(); ++i) {
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(std::abs(a.agents[i].logits[k] - b.agents[i].logits[k]) < 1e-12);
      const auto anchor_a = constant_velocity_anchor(scene.agents[i], 30, 0.1);
      const auto anchor_b = constant_velocity_anchor(moved.agents[i], 30, 0.1);
      for (std::size_t t = 0; t < 30; ++t) {
        const Vec2 da = a.agents[i].trajectories[k][t] - anchor_a[t];
        const Vec2 db = b.agents[i].trajectories[k][t] - anchor_b[t];
        CHECK((da - db).norm() < 1e-9);
      }
    }
  }
}

TEST_CASE("dimension mismatches are rejected")
{
  const auto params = PredictorParams::initialize(small_dims(), 1);
  const Scene other = fixtures::moving_scene({{0, 0}, {4, 0}}, {{1, 0}, {0, 1}}, 4, 30);
  CHECK_THROWS_AS(forward(params, other), std::invalid_argument);
  PredictorDims bad = small_dims();
  bad.hidden = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("parameter count follows the layer shapes")
{
  const auto d = small_dims(4);
  const auto params = PredictorParams::initialize(d, 2);
  const std::size_t h = d.hidden;
  const std::size_t expected = h * d.history_features() + h + h * h + h + h * d.pair_features() + h +
                               d.head_outputs() * 2 * h + d.head_outputs() + d.modes * 2 * h + d.modes;
  CHECK(params.parameter_count() == expected);
  CHECK(PredictorParams::zeros(d).parameter_count() == expected);
}

TEST_CASE("initialization stays within the fan-in bound")
{
  const auto params = PredictorParams::initialize(small_dims(), 9);
  params.for_each_tensor([](const std::string & name, const Eigen::MatrixXd & m) {
    (void)name;
    REQUIRE(m.allFinite());
  });
  const double bound = 1.0 / std::sqrt(static_cast<double>(small_dims().history_features()));
  CHECK(params.enc1_w.cwiseAbs().maxCoeff() <= bound);
}

TEST_CASE("checkpoints round-trip bit-exactly")
{
  auto params = PredictorParams::initialize(small_dims(), 11);
  params.enc1_w(0, 0) = 1.0 / 3.0;
  params.logit_b(1, 0) = -5e-310;  // subnormal
  const auto back = parse_checkpoint(format_checkpoint(params));
  CHECK(back == params);
  CHECK(back.seed == 11);

  const auto path = std::filesystem::temp_directory_path() / "trajpref_params.ckpt";
  save_checkpoint(path, params);
  CHECK(load_checkpoint(path) == params);
  std::filesystem::remove(path);
}

TEST_CASE("damaged checkpoints are rejected")
{
  const auto params = PredictorParams::initialize(small_dims(), 11);
  std::string text = format_checkpoint(params);
  CHECK_THROWS_AS(parse_checkpoint(text.substr(0, text.size() / 2)), ValidationError);
  CHECK_THROWS_AS(parse_checkpoint("{\"format\": \"something else\"}"), ValidationError);
  CHECK_THROWS_AS(load_checkpoint("/nonexistent/params.ckpt"), MissingArtifactError);
}

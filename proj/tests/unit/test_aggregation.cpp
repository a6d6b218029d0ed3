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

#include <algorithm>
#include <numeric>
#include <random>

#include "trajpref/aggregation.hpp"
#include "trajpref/numerics.hpp"
#include "unit/fixtures.hpp"

using namespace trajpref;

namespace
{

MarginalPrediction with_logits(const std::vector<std::vector<double>> & logits, std::size_t steps = 2)
{
  MarginalPrediction p;
  for (std::size_t a = 0; a < logits.size(); ++a) {
    AgentPrediction ap;
    ap.logits = logits[a];
    for (std::size_t k = 0; k < logits[a].size(); ++k) {
      ap.trajectories.push_back(fixtures::constant({double(a), double(k)}, steps));
    }
    p.agents.push_back(ap);
  }
  return p;
}

std::vector<std::size_t> argsort_desc(const std::vector<double> & v)
{
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
  return idx;
}

}  // namespace

TEST_CASE("per-agent mode ranking")
{
  CHECK(rank_marginal_modes(with_logits({{2, 0, 1}}))[0] == std::vector<std::size_t>{0, 2, 1});
  CHECK(rank_marginal_modes(with_logits({{0, 0, 0}}))[0] == std::vector<std::size_t>{0, 1, 2});

  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const auto logits = fixtures::random_vector(rng, 8, -2, 2);
    CHECK(rank_marginal_modes(with_logits({logits}))[0] == argsort_desc(logits));
  }
}

TEST_CASE("joint aggregation pairs modes by rank and averages logits")
{
  const auto joint = aggregate_to_joint(with_logits({{2, 0, 1}, {0.5, 1.5, -1}}));
  REQUIRE(joint.num_modes() == 3);
  CHECK(joint.modes[0].source_modes == std::vector<std::size_t>{0, 1});
  CHECK(joint.modes[1].source_modes == std::vector<std::size_t>{2, 0});
  CHECK(joint.modes[2].source_modes == std::vector<std::size_t>{1, 2});
  CHECK(joint.scene_logits == std::vector<double>{1.75, 0.75, -0.5});
  // trajectories are carried over untouched
  CHECK(joint.modes[1].trajectories[0] == fixtures::constant({0, 2}, 2));
  CHECK(joint.modes[1].trajectories[1] == fixtures::constant({1, 0}, 2));
}

TEST_CASE("single agent and identical logits")
{
  const auto single = aggregate_to_joint(with_logits({{0.3, 1.2, -0.4}}));
  CHECK(single.scene_logits == std::vector<double>{1.2, 0.3, -0.4});

  const auto same = aggregate_to_joint(with_logits({{1, 3, 2}, {1, 3, 2}, {1, 3, 2}}));
  CHECK(same.scene_logits == std::vector<double>{3, 2, 1});
}

TEST_CASE("mismatched mode counts are rejected")
{
  CHECK_THROWS_AS(aggregate_to_joint(with_logits({{1, 2}, {1, 2, 3}})), std::invalid_argument);
}

TEST_CASE("scene probabilities are the softmax of the scene logits")
{
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const auto joint = aggregate_to_joint(fixtures::random_prediction(rng, 3, 6, 2));
    const auto expected = softmax(joint.scene_logits);
    double total = 0.0;
    for (std::size_t k = 0; k < joint.num_modes(); ++k) {
      CHECK(std::abs(joint.scene_probs[k] - expected[k]) < 1e-12);
      CHECK(joint.scene_probs[k] >= 0.0);
      total += joint.scene_probs[k];
      if (k > 0) {
        CHECK(joint.scene_probs[k] <= joint.scene_probs[k - 1]);
        CHECK(joint.scene_logits[k] <= joint.scene_logits[k - 1]);
      }
    }
    CHECK(std::abs(total - 1.0) < 1e-9);
  }
}

TEST_CASE("softmax fixture matches the high-precision oracle")
{
  const std::vector<double> logits{0.3, -1.2, 2.5, 0.0, 1.1, -0.4};
  const std::vector<double> oracle{
    0.07293367176926079683134954, 0.01627370186208817710289392, 0.658227372280875937813886,
    0.05403059294788822130734427, 0.1623168715877255462834592, 0.03621778955216132066106702};
  const auto p = softmax(logits);
  for (std::size_t i = 0; i < logits.size(); ++i) {
    CHECK(std::abs(p[i] - oracle[i]) < 1e-15);
  }
}

TEST_CASE("property: softmax ignores a constant shift")
{
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    auto logits = fixtures::random_vector(rng, 7, -5, 5);
    const auto p = softmax(logits);
    for (auto & l : logits) {
      l += 123.456;
    }
    const auto q = softmax(logits);
    for (std::size_t i = 0; i < p.size(); ++i) {
      CHECK(std::abs(p[i] - q[i]) < 1e-12);
    }
  }
}

TEST_CASE("top-mode selection")
{
  SUBCASE("n = K is the identity")
  {
    std::mt19937_64 rng(5);
    const auto joint = aggregate_to_joint(fixtures::random_prediction(rng, 2, 6, 2));
    const auto top = select_top_modes(joint, 6);
    CHECK(top.scene_probs == joint.scene_probs);
    CHECK(top.scene_logits == joint.scene_logits);
  }
  SUBCASE("oracle top-3 renormalization of the fixture")
  {
    const auto joint = aggregate_to_joint(with_logits({{0.3, -1.2, 2.5, 0.0, 1.1, -0.4}}));
    const auto top = select_top_modes(joint, 3);
    REQUIRE(top.num_modes() == 3);
    CHECK(top.modes[0].source_modes[0] == 2);
    CHECK(top.modes[1].source_modes[0] == 4);
    CHECK(top.modes[2].source_modes[0] == 0);
    CHECK(std::abs(top.scene_probs[0] - 0.7367024531445315362779283) < 1e-15);
    CHECK(std::abs(top.scene_probs[1] - 0.181668588273775078362237) < 1e-15);
    CHECK(std::abs(top.scene_probs[2] - 0.08162895858169338535983471) < 1e-15);
  }
  SUBCASE("a dominant mode stays first")
  {
    std::vector<double> logits(15, 0.0);
    logits[9] = std::log(0.9 / 0.1 * 14.0);
    const auto top = select_top_modes(aggregate_to_joint(with_logits({logits})), 6);
    CHECK(top.modes[0].source_modes[0] == 9);
    CHECK(std::is_sorted(top.scene_probs.rbegin(), top.scene_probs.rend()));
  }
  SUBCASE("random K = 12 matches brute-force top-6")
  {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 30; ++trial) {
      const auto joint = aggregate_to_joint(fixtures::random_prediction(rng, 2, 12, 2));
      const auto top = select_top_modes(joint, 6);
      const auto order = argsort_desc(joint.scene_probs);
      double kept = 0.0;
      for (std::size_t i = 0; i < 6; ++i) {
        kept += joint.scene_probs[order[i]];
      }
      for (std::size_t i = 0; i < 6; ++i) {
        CHECK(top.modes[i].source_modes == joint.modes[order[i]].source_modes);
        CHECK(std::abs(top.scene_probs[i] - joint.scene_probs[order[i]] / kept) < 1e-12);
      }
    }
  }
  SUBCASE("n > K is an error")
  {
    const auto joint = aggregate_to_joint(with_logits({{1, 2, 3}}));
    CHECK_THROWS_AS(select_top_modes(joint, 4), std::invalid_argument);
  }
}

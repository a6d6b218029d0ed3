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

#include <cmath>
#include <random>

#include "trajpref/aggregation.hpp"
#include "trajpref/errors.hpp"
#include "trajpref/metrics.hpp"
#include "trajpref/preference.hpp"
#include "unit/fixtures.hpp"

using namespace trajpref;
using fixtures::constant;

namespace
{

CollisionSummary flags(std::initializer_list<bool> collided)
{
  CollisionSummary s;
  for (bool c : collided) {
    s.modes.push_back({c ? 1 : 0, c});
  }
  return s;
}

/// Two agents heading for the origin; mode 0 of each agent meets there, the
/// other modes stay in their own lanes.
Scene two_agent_scene(const std::string & id = "s")
{
  return fixtures::moving_scene({{-5, 0}, {0, -5}}, {{10, 0}, {0, 10}}, 4, 5, 0.1, id);
}

MarginalPrediction two_agent_prediction(std::vector<double> logits)
{
  MarginalPrediction p;
  for (std::size_t a = 0; a < 2; ++a) {
    AgentPrediction ap;
    ap.logits = logits;
    for (std::size_t k = 0; k < logits.size(); ++k) {
      // mode 0 ends both agents at the origin, mode k > 0 keeps them 2k m apart
      const double off = 2.0 * static_cast<double>(k);
      ap.trajectories.push_back(constant(a == 0 ? Vec2{-off, 0} : Vec2{0, off}, 5));
    }
    p.agents.push_back(ap);
  }
  return p;
}

}  // namespace

TEST_CASE("scene collision rate")
{
  CHECK(scene_scr(flags({false, false, false})) == 0.0);
  CHECK(scene_scr(flags({true, false, false})) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(scene_scr(flags({true, true, true})) == 1.0);
}

TEST_CASE("probability-weighted collision rate")
{
  const std::vector<double> probs{0.3, 0.5, 0.2};
  CHECK(scene_pscr(probs, flags({true, false, false})) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(scene_pscr(probs, flags({false, false, false})) == 0.0);

  // uniform probabilities reduce to the plain rate
  const std::vector<double> uniform(4, 0.25);
  CHECK(scene_pscr(uniform, flags({true, false, true, false})) == scene_scr(flags({true, false, true, false})));

  const std::vector<double> unnormalized{0.3, 0.3, 0.3};
  CHECK_THROWS_AS(scene_pscr(unnormalized, flags({true, false, false})), std::invalid_argument);
}

TEST_CASE("minimum joint final displacement")
{
  const std::vector<Trajectory> gt{constant({0, 0}, 2), constant({10, 0}, 2)};
  JointModeSet joint;
  for (double dx : {2.0, 1.5, 3.0}) {
    joint.modes.push_back({{constant({dx, 0}, 2), constant({10 + dx, 0}, 2)}, {0, 0}});
  }
  CHECK(min_joint_fde(joint, gt) == 1.5);

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const auto j = aggregate_to_joint(fixtures::random_prediction(rng, 3, 6, 4));
    std::vector<Trajectory> truth = j.modes[0].trajectories;
    truth[1].back() += Vec2{0.7, -0.2};
    double brute = 1e300;
    for (const auto & m : j.modes) {
      brute = std::min(brute, avg_fde(m.trajectories, truth));
    }
    CHECK(min_joint_fde(j, truth) == brute);
  }
}

TEST_CASE("scene evaluation of a hand-built prediction")
{
  const Scene scene = two_agent_scene();
  EvalOptions opt;
  opt.top_n = 3;
  const auto m = evaluate_scene(scene, two_agent_prediction({1.0, 0.0, 0.0}), opt);
  const double e = std::exp(1.0);
  CHECK(m.scr == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(m.pscr == doctest::Approx(e / (e + 2.0)).epsilon(1e-14));
  CHECK(m.min_distance == 0.0);
  CHECK(m.scene_id == "s");
}

TEST_CASE("lowering the colliding mode's probability lowers pSCR only")
{
  const Scene scene = two_agent_scene();
  EvalOptions opt;
  opt.top_n = 3;
  double previous_pscr = 2.0;
  for (double l : {2.0, 1.0, 0.0, -1.0, -3.0}) {
    // mode 0 keeps the top rank in ties through its index, so use a strict order
    const auto m = evaluate_scene(scene, two_agent_prediction({l, -4.0, -5.0}), opt);
    CHECK(m.scr == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(m.pscr < previous_pscr);
    // envelope: the weighted rate never exceeds the colliding mass bound 1
    CHECK(m.pscr >= 0.0);
    CHECK(m.pscr <= 1.0);
    previous_pscr = m.pscr;
  }
}

TEST_CASE("dataset metrics are scene means")
{
  std::vector<Scene> scenes{two_agent_scene("a"), two_agent_scene("b")};
  PredictionMap preds;
  preds["a"] = two_agent_prediction({1.0, 0.0, 0.0});
  preds["b"] = two_agent_prediction({-2.0, 0.0, 0.5});
  EvalOptions opt;
  opt.top_n = 3;
  const auto ra = evaluate_scene(scenes[0], preds["a"], opt);
  const auto rb = evaluate_scene(scenes[1], preds["b"], opt);
  const auto report = evaluate_dataset(scenes, preds, opt);
  CHECK(report.n_scenes == 2);
  CHECK(report.scr == doctest::Approx((ra.scr + rb.scr) / 2).epsilon(1e-15));
  CHECK(report.pscr == doctest::Approx((ra.pscr + rb.pscr) / 2).epsilon(1e-15));
  CHECK(report.min_joint_fde == doctest::Approx((ra.min_joint_fde + rb.min_joint_fde) / 2).epsilon(1e-15));

  SUBCASE("one scene")
  {
    const std::vector<Scene> one{scenes[0]};
    const auto r = evaluate_dataset(one, preds, opt);
    CHECK(r.scr == ra.scr);
    CHECK(r.pscr == ra.pscr);
  }
  SUBCASE("duplicating and reordering scenes changes nothing")
  {
    std::vector<Scene> twice{scenes[1], scenes[0], scenes[0], scenes[1]};
    const auto r = evaluate_dataset(twice, preds, opt);
    CHECK(r.scr == doctest::Approx(report.scr).epsilon(1e-15));
    CHECK(r.pscr == doctest::Approx(report.pscr).epsilon(1e-15));
    CHECK(r.min_joint_fde == doctest::Approx(report.min_joint_fde).epsilon(1e-15));
  }
  SUBCASE("a scene without a prediction is reported by name")
  {
    scenes.push_back(two_agent_scene("c"));
    CHECK_THROWS_WITH_AS(evaluate_dataset(scenes, preds, opt), doctest::Contains("'c'"), MissingArtifactError);
  }
}

TEST_CASE("relative changes")
{
  MetricsReport before, after;
  before.scr = 0.2;
  after.scr = 0.1;
  before.pscr = 0.0;
  after.pscr = 0.05;
  before.min_joint_fde = 2.0;
  after.min_joint_fde = 2.0;
  const auto c = compare_reports(before, after);
  CHECK(c[0].name == "scr");
  CHECK(c[0].relative_change_percent == doctest::Approx(-50.0));
  CHECK(std::isnan(c[1].relative_change_percent));
  CHECK(c[2].relative_change_percent == 0.0);
  CHECK(c[3].relative_change_percent == 0.0);
  CHECK(comparison_json(c).find("null") != std::string::npos);
}

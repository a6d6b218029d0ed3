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
#include <filesystem>
#include <limits>
#include <random>

#include "trajpref/errors.hpp"
#include "trajpref/file_util.hpp"
#include "trajpref/scene_io.hpp"
#include "trajpref/scenegen.hpp"
#include "unit/fixtures.hpp"

using namespace trajpref;

namespace
{

bool has_violation(const ValidationResult & r, const std::string & needle)
{
  for (const auto & v : r.violations) {
    if (v.find(needle) != std::string::npos) {
      return true;
    }
  }
  return false;
}

Scene two_agent_scene()
{
  return fixtures::moving_scene({{0.0, 0.0}, {5.0, 3.0}}, {{1.0, 0.0}, {0.0, -1.0}});
}

}  // namespace

TEST_CASE("validate_scene accepts a well-formed two-agent scene")
{
  CHECK(validate_scene(two_agent_scene()).ok());
}

TEST_CASE("validate_scene reports a NaN position")
{
  Scene s = two_agent_scene();
  s.agents[1].past_positions[2].x = std::numeric_limits<double>::quiet_NaN();
  const auto r = validate_scene(s);
  CHECK_FALSE(r.ok());
  CHECK(has_violation(r, "non-finite coordinate"));
}

TEST_CASE("validate_scene reports a short future")
{
  Scene s = two_agent_scene();
  s.ground_truth_futures[0].pop_back();
  CHECK(has_violation(validate_scene(s), "future length mismatch"));
}

TEST_CASE("validate_scene reports structural problems")
{
  Scene empty;
  empty.horizon = 3;
  CHECK(has_violation(validate_scene(empty), "no agents"));

  Scene s = two_agent_scene();
  s.agents[0].past_yaws.pop_back();
  CHECK(has_violation(validate_scene(s), "past sequence length mismatch"));

  Scene yaw = two_agent_scene();
  yaw.agents[0].past_yaws[0] = -std::acos(-1.0);
  CHECK(has_violation(validate_scene(yaw), "yaw outside"));
}

TEST_CASE("scene files round-trip bit-exactly")
{
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  std::vector<Scene> scenes;
  for (int i = 0; i < 10; ++i) {
    Scene s = two_agent_scene();
    s.scene_id = "rt-" + std::to_string(i);
    for (auto & a : s.agents) {
      for (auto & p : a.past_positions) {
        p = {u(rng), u(rng) * 1e-7};
      }
    }
    for (auto & f : s.ground_truth_futures) {
      for (auto & p : f) {
        p = {u(rng) / 3.0, std::nextafter(u(rng), 0.0)};
      }
    }
    scenes.push_back(s);
  }
  const auto path = std::filesystem::temp_directory_path() / "trajpref_roundtrip.jsonl";
  write_scenes(path, scenes);
  const auto back = read_scenes(path);
  REQUIRE(back.size() == 10);
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    CHECK(back[i] == scenes[i]);
  }
  std::filesystem::remove(path);
}

TEST_CASE("a truncated scene file fails with the line number")
{
  std::vector<Scene> scenes{two_agent_scene(), two_agent_scene()};
  scenes[1].scene_id = "second";
  std::string text = format_scenes(scenes);
  text.resize(text.size() - 25);
  try {
    parse_scenes(text);
    FAIL("expected a parse error");
  } catch (const ParseError & e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("a missing field is named in the error")
{
  std::string text = format_scenes(std::vector<Scene>{two_agent_scene()});
  const auto pos = text.find("\"horizon\"");
  text.replace(pos, 9, "\"horizonX\"");
  CHECK_THROWS_WITH_AS(parse_scenes(text), doctest::Contains("horizon"), ParseError);
}

TEST_CASE("an empty scene file is an empty dataset")
{
  CHECK(parse_scenes("").empty());
  const auto path = std::filesystem::temp_directory_path() / "trajpref_empty.jsonl";
  write_text_file(path, "");
  CHECK(read_scenes(path).empty());
  std::filesystem::remove(path);
}

TEST_CASE("unknown schema versions and mixed horizons are rejected")
{
  std::string text = format_scenes(std::vector<Scene>{two_agent_scene()});
  std::string bumped = text;
  bumped.replace(bumped.find("\"schema_version\":1"), 18, "\"schema_version\":9");
  CHECK_THROWS_WITH_AS(parse_scenes(bumped), doctest::Contains("schema"), ParseError);

  Scene longer = fixtures::moving_scene({{0.0, 0.0}}, {{1.0, 0.0}}, 4, 7);
  std::string mixed = text + format_scenes(std::vector<Scene>{longer}).substr(text.find('\n') + 1);
  CHECK_THROWS_AS(parse_scenes(mixed), ParseError);
}

TEST_CASE("reading a missing file names the path")
{
  CHECK_THROWS_AS(read_scenes("/nonexistent/scenes.jsonl"), MissingArtifactError);
}

TEST_CASE("prediction dumps round-trip")
{
  std::mt19937_64 rng(5);
  std::vector<MarginalPrediction> preds{fixtures::random_prediction(rng, 2, 3, 4)};
  std::vector<std::string> ids{"p0"};
  const auto path = std::filesystem::temp_directory_path() / "trajpref_preds.jsonl";
  write_predictions(path, ids, preds);
  const auto back = read_predictions(path);
  REQUIRE(back.count("p0") == 1);
  for (std::size_t a = 0; a < 2; ++a) {
    CHECK(back.at("p0").agents[a].logits == preds[0].agents[a].logits);
    CHECK(back.at("p0").agents[a].trajectories == preds[0].agents[a].trajectories);
  }
  std::filesystem::remove(path);
}

TEST_CASE("every generated scene passes validation")
{
  const auto ds = generate_dataset(default_mixture(), 200, 11);
  for (const auto & s : ds.scenes) {
    const auto r = validate_scene(s);
    CHECK_MESSAGE(r.ok(), s.scene_id);
  }
}

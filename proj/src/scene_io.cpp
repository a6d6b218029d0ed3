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

#include "trajpref/scene_io.hpp"

#include <optional>
#include <sstream>

#include <json.hpp>

#include "trajpref/errors.hpp"
#include "trajpref/file_util.hpp"

namespace trajpref
{

using nlohmann::json;

namespace
{

struct FieldError
{
  std::string field;
  std::string message;
};

const json & field(const json & obj, const char * name)
{
  if (!obj.is_object()) {
    throw FieldError{name, "record is not an object"};
  }
  auto it = obj.find(name);
  if (it == obj.end()) {
    throw FieldError{name, "missing field"};
  }
  return *it;
}

double number(const json & v, const char * name)
{
  if (!v.is_number()) {
    throw FieldError{name, "expected a number"};
  }
  return v.get<double>();
}

std::vector<Vec2> points(const json & v, const char * name)
{
  if (!v.is_array()) {
    throw FieldError{name, "expected an array of [x, y] pairs"};
  }
  std::vector<Vec2> out;
  out.reserve(v.size());
  for (const auto & p : v) {
    if (!p.is_array() || p.size() != 2) {
      throw FieldError{name, "expected an [x, y] pair"};
    }
    out.push_back({number(p[0], name), number(p[1], name)});
  }
  return out;
}

json to_json(const std::vector<Vec2> & pts)
{
  json arr = json::array();
  for (const auto & p : pts) {
    arr.push_back({p.x, p.y});
  }
  return arr;
}

struct Header
{
  int schema_version{0};
  std::size_t t_obs{0};
  std::size_t t_fut{0};
};

Header parse_header(const json & rec, int expected_version)
{
  if (!rec.is_object() || rec.value("record", "") != "header") {
    throw FieldError{"record", "first line must be a header record"};
  }
  Header h;
  h.schema_version = static_cast<int>(number(field(rec, "schema_version"), "schema_version"));
  if (h.schema_version != expected_version) {
    throw FieldError{
      "schema_version", "unknown schema version " + std::to_string(h.schema_version)};
  }
  h.t_obs = static_cast<std::size_t>(number(field(rec, "T_obs"), "T_obs"));
  h.t_fut = static_cast<std::size_t>(number(field(rec, "T_fut"), "T_fut"));
  return h;
}

Scene parse_scene(const json & rec)
{
  Scene s;
  const auto & id = field(rec, "scene_id");
  if (!id.is_string()) {
    throw FieldError{"scene_id", "expected a string"};
  }
  s.scene_id = id.get<std::string>();
  const auto & agents = field(rec, "agents");
  if (!agents.is_array()) {
    throw FieldError{"agents", "expected an array"};
  }
  for (const auto & a : agents) {
    AgentTrack t;
    const auto & aid = field(a, "agent_id");
    if (!aid.is_number_integer()) {
      throw FieldError{"agent_id", "expected an integer"};
    }
    t.agent_id = aid.get<std::int64_t>();
    t.past_positions = points(field(a, "past_positions"), "past_positions");
    t.past_velocities = points(field(a, "past_velocities"), "past_velocities");
    const auto & yaws = field(a, "past_yaws");
    if (!yaws.is_array()) {
      throw FieldError{"past_yaws", "expected an array"};
    }
    for (const auto & y : yaws) {
      t.past_yaws.push_back(number(y, "past_yaws"));
    }
    s.agents.push_back(std::move(t));
  }
  const auto & futures = field(rec, "ground_truth_futures");
  if (!futures.is_array()) {
    throw FieldError{"ground_truth_futures", "expected an array"};
  }
  for (const auto & f : futures) {
    s.ground_truth_futures.push_back(points(f, "ground_truth_futures"));
  }
  s.horizon = static_cast<std::size_t>(number(field(rec, "horizon"), "horizon"));
  return s;
}

json scene_to_json(const Scene & s)
{
  json agents = json::array();
  for (const auto & a : s.agents) {
    agents.push_back(
      {{"agent_id", a.agent_id},
       {"past_positions", to_json(a.past_positions)},
       {"past_velocities", to_json(a.past_velocities)},
       {"past_yaws", a.past_yaws}});
  }
  json futures = json::array();
  for (const auto & f : s.ground_truth_futures) {
    futures.push_back(to_json(f));
  }
  return {
    {"scene_id", s.scene_id},
    {"agents", std::move(agents)},
    {"ground_truth_futures", std::move(futures)},
    {"horizon", s.horizon}};
}

/// Calls `fn(line_no, record)` for every non-blank line; wraps failures in ParseError.
template <class Fn>
void for_each_record(const std::string & text, Fn && fn)
{
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error & e) {
      throw ParseError(line_no, std::string("malformed record: ") + e.what());
    }
    try {
      fn(line_no, rec);
    } catch (const FieldError & e) {
      throw ParseError(line_no, "field '" + e.field + "': " + e.message);
    }
  }
}

}  // namespace

std::vector<Scene> parse_scenes(const std::string & text)
{
  std::vector<Scene> scenes;
  std::optional<Header> header;
  for_each_record(text, [&](std::size_t line_no, const json & rec) {
    if (!header) {
      header = parse_header(rec, kSceneSchemaVersion);
      return;
    }
    Scene s = parse_scene(rec);
    if (s.horizon != header->t_fut) {
      throw ParseError(line_no, "field 'horizon': mixed horizons in one file are not supported");
    }
    if (s.obs_steps() != header->t_obs) {
      throw ParseError(line_no, "field 'past_positions': T_obs differs from the header");
    }
    scenes.push_back(std::move(s));
  });
  return scenes;
}

std::string format_scenes(std::span<const Scene> scenes)
{
  if (scenes.empty()) {
    return {};
  }
  const std::size_t t_obs = scenes.front().obs_steps();
  const std::size_t t_fut = scenes.front().horizon;
  std::string out =
    json{{"record", "header"}, {"schema_version", kSceneSchemaVersion}, {"T_obs", t_obs},
         {"T_fut", t_fut}}
      .dump();
  out += '\n';
  for (const auto & s : scenes) {
    if (s.obs_steps() != t_obs || s.horizon != t_fut) {
      throw std::invalid_argument(
        "scene " + s.scene_id + ": mixed T_obs/T_fut in one file are not supported");
    }
    out += scene_to_json(s).dump();
    out += '\n';
  }
  return out;
}

std::vector<Scene> read_scenes(const std::filesystem::path & path)
{
  return parse_scenes(read_text_file(path));
}

void write_scenes(const std::filesystem::path & path, std::span<const Scene> scenes)
{
  write_text_file(path, format_scenes(scenes));
}

PredictionMap read_predictions(const std::filesystem::path & path)
{
  PredictionMap out;
  bool have_header = false;
  for_each_record(read_text_file(path), [&](std::size_t line_no, const json & rec) {
    if (!have_header) {
      if (!rec.is_object() || rec.value("record", "") != "header") {
        throw FieldError{"record", "first line must be a header record"};
      }
      const int version = static_cast<int>(number(field(rec, "schema_version"), "schema_version"));
      if (version != kPredictionSchemaVersion) {
        throw FieldError{"schema_version", "unknown schema version " + std::to_string(version)};
      }
      have_header = true;
      return;
    }
    const auto & id = field(rec, "scene_id");
    if (!id.is_string()) {
      throw FieldError{"scene_id", "expected a string"};
    }
    MarginalPrediction pred;
    for (const auto & a : field(rec, "agents")) {
      AgentPrediction ap;
      for (const auto & l : field(a, "logits")) {
        ap.logits.push_back(number(l, "logits"));
      }
      for (const auto & t : field(a, "trajectories")) {
        ap.trajectories.push_back(points(t, "trajectories"));
      }
      if (ap.logits.size() != ap.trajectories.size()) {
        throw FieldError{"logits", "logit count differs from trajectory count"};
      }
      pred.agents.push_back(std::move(ap));
    }
    if (!out.emplace(id.get<std::string>(), std::move(pred)).second) {
      throw ParseError(line_no, "duplicate scene id " + id.get<std::string>());
    }
  });
  return out;
}

void write_predictions(
  const std::filesystem::path & path, std::span<const std::string> scene_ids,
  std::span<const MarginalPrediction> predictions)
{
  if (scene_ids.size() != predictions.size()) {
    throw std::invalid_argument("write_predictions: id/prediction count mismatch");
  }
  std::string out =
    json{{"record", "header"}, {"schema_version", kPredictionSchemaVersion}}.dump() + "\n";
  for (std::size_t i = 0; i < scene_ids.size(); ++i) {
    json agents = json::array();
    for (const auto & a : predictions[i].agents) {
      json trajs = json::array();
      for (const auto & t : a.trajectories) {
        trajs.push_back(to_json(t));
      }
      agents.push_back({{"logits", a.logits}, {"trajectories", std::move(trajs)}});
    }
    out += json{{"scene_id", scene_ids[i]}, {"agents", std::move(agents)}}.dump();
    out += '\n';
  }
  write_text_file(path, out);
}

}  // namespace trajpref

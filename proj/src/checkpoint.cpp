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

#include "trajpref/checkpoint.hpp"

#include <stdexcept>

#include <json.hpp>

#include "trajpref/errors.hpp"
#include "trajpref/file_util.hpp"

namespace trajpref
{

using nlohmann::json;

std::string format_checkpoint(const PredictorParams & params)
{
  const auto & d = params.dims;
  json tensors = json::array();
  params.for_each_tensor([&tensors](const char * name, const Eigen::MatrixXd & m) {
    tensors.push_back(
      {{"name", name},
       {"shape", {m.rows(), m.cols()}},
       {"data", std::vector<double>(m.data(), m.data() + m.size())}});
  });
  json doc = {
    {"format", "trajpref-checkpoint"},
    {"version", kCheckpointVersion},
    {"seed", params.seed},
    {"dims",
     {{"obs_steps", d.obs_steps},
      {"fut_steps", d.fut_steps},
      {"hidden", d.hidden},
      {"modes", d.modes},
      {"dt", d.dt}}},
    {"parameter_count", params.parameter_count()},
    {"tensors", std::move(tensors)}};
  return doc.dump() + "\n";
}

PredictorParams parse_checkpoint(const std::string & text)
{
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error & e) {
    throw ValidationError(std::string("malformed checkpoint: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != "trajpref-checkpoint") {
      throw ValidationError("not a trajpref checkpoint");
    }
    if (doc.at("version").get<int>() != kCheckpointVersion) {
      throw ValidationError(
        "unsupported checkpoint version " + std::to_string(doc.at("version").get<int>()));
    }
    PredictorDims dims;
    const auto & jd = doc.at("dims");
    dims.obs_steps = jd.at("obs_steps").get<std::size_t>();
    dims.fut_steps = jd.at("fut_steps").get<std::size_t>();
    dims.hidden = jd.at("hidden").get<std::size_t>();
    dims.modes = jd.at("modes").get<std::size_t>();
    dims.dt = jd.at("dt").get<double>();

    auto params = PredictorParams::zeros(dims);
    params.seed = doc.at("seed").get<std::uint64_t>();
    const auto & tensors = doc.at("tensors");
    std::size_t idx = 0;
    params.for_each_tensor([&](const char * name, Eigen::MatrixXd & m) {
      if (idx >= tensors.size()) {
        throw ValidationError(std::string("checkpoint is missing tensor ") + name);
      }
      const auto & t = tensors[idx++];
      if (t.at("name").get<std::string>() != name) {
        throw ValidationError(std::string("unexpected tensor order at ") + name);
      }
      const auto shape = t.at("shape").get<std::vector<Eigen::Index>>();
      if (shape.size() != 2 || shape[0] != m.rows() || shape[1] != m.cols()) {
        throw ValidationError(std::string("shape mismatch for ") + name);
      }
      const auto data = t.at("data").get<std::vector<double>>();
      if (static_cast<Eigen::Index>(data.size()) != m.size()) {
        throw ValidationError(std::string("data size mismatch for ") + name);
      }
      m = Eigen::Map<const Eigen::MatrixXd>(data.data(), m.rows(), m.cols());
    });
    if (doc.at("parameter_count").get<std::size_t>() != params.parameter_count()) {
      throw ValidationError("parameter count mismatch");
    }
    return params;
  } catch (const json::exception & e) {
    throw ValidationError(std::string("malformed checkpoint: ") + e.what());
  }
}

void save_checkpoint(const std::filesystem::path & path, const PredictorParams & params)
{
  write_text_file(path, format_checkpoint(params));
}

PredictorParams load_checkpoint(const std::filesystem::path & path)
{
  return parse_checkpoint(read_text_file(path));
}

}  // namespace trajpref

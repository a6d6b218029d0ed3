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

#include "trajpref/manifest.hpp"

#include "trajpref/errors.hpp"
#include "trajpref/file_util.hpp"

namespace trajpref
{

using nlohmann::ordered_json;

std::filesystem::path manifest_path(const std::filesystem::path & artifact)
{
  return std::filesystem::path(artifact.string() + ".manifest.json");
}

std::map<std::string, std::string> hash_files(
  const std::vector<std::filesystem::path> & files, const std::string & step)
{
  std::map<std::string, std::string> out;
  for (const auto & f : files) {
    if (!std::filesystem::exists(f)) {
      throw MissingArtifactError(f.string() + " does not exist; run '" + step + "' first");
    }
    out[f.string()] = git_blob_hash(read_text_file(f));
  }
  return out;
}

std::string format_manifest(const RunManifest & m)
{
  ordered_json j = {
    {"command", m.command},
    {"config_hash", m.config_hash},
    {"seed", m.seed},
    {"inputs", m.inputs},
    {"outputs", m.outputs},
    {"wall_time_s", m.wall_time_s},
    {"config", m.config},
  };
  if (!m.extra.empty()) {
    j["extra"] = m.extra;
  }
  return j.dump(2) + "\n";
}

RunManifest parse_manifest(const std::string & text)
{
  try {
    const auto j = ordered_json::parse(text);
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.config_hash = j.at("config_hash").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.inputs = j.at("inputs").get<std::map<std::string, std::string>>();
    m.outputs = j.at("outputs").get<std::map<std::string, std::string>>();
    m.wall_time_s = j.at("wall_time_s").get<double>();
    m.config = j.at("config");
    if (j.contains("extra")) {
      m.extra = j.at("extra");
    }
    return m;
  } catch (const nlohmann::json::exception & err) {
    throw ValidationError(std::string("malformed manifest: ") + err.what());
  }
}

void write_manifest(const std::filesystem::path & path, const RunManifest & manifest)
{
  write_text_file(path, format_manifest(manifest));
}

std::optional<RunManifest> read_manifest(const std::filesystem::path & path)
{
  if (!std::filesystem::exists(path)) {
    return std::nullopt;
  }
  return parse_manifest(read_text_file(path));
}

bool manifest_up_to_date(
  const std::filesystem::path & path, const std::string & config_hash,
  const std::map<std::string, std::string> & inputs)
{
  std::optional<RunManifest> m;
  try {
    m = read_manifest(path);
  } catch (const ValidationError &) {
    return false;
  }
  if (!m || m->config_hash != config_hash || m->inputs != inputs) {
    return false;
  }
  for (const auto & [file, hash] : m->outputs) {
    if (!std::filesystem::exists(file) || git_blob_hash(read_text_file(file)) != hash) {
      return false;
    }
  }
  return true;
}

}  // namespace trajpref

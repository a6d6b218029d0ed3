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

#ifndef TRAJPREF__MANIFEST_HPP_
#define TRAJPREF__MANIFEST_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace trajpref
{

/// Provenance written next to every pipeline artifact.
struct RunManifest
{
  std::string command;
  std::string config_hash;
  std::uint64_t seed{0};
  std::map<std::string, std::string> inputs;   ///< path -> git blob hash
  std::map<std::string, std::string> outputs;  ///< path -> git blob hash
  double wall_time_s{0.0};
  nlohmann::ordered_json config;  ///< merged run config
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();
};

/// `<artifact>.manifest.json`
std::filesystem::path manifest_path(const std::filesystem::path & artifact);

/// Git blob hash of each file; throws MissingArtifactError naming `step` when
/// one is absent.
std::map<std::string, std::string> hash_files(
  const std::vector<std::filesystem::path> & files, const std::string & step);

std::string format_manifest(const RunManifest & manifest);
RunManifest parse_manifest(const std::string & text);

void write_manifest(const std::filesystem::path & path, const RunManifest & manifest);
std::optional<RunManifest> read_manifest(const std::filesystem::path & path);

/// True when every output exists with the recorded hash and the manifest was
/// produced from the same config and inputs.
bool manifest_up_to_date(
  const std::filesystem::path & path, const std::string & config_hash,
  const std::map<std::string, std::string> & inputs);

}  // namespace trajpref

#endif  // TRAJPREF__MANIFEST_HPP_

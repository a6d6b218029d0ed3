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

#ifndef TRAJPREF__CONFIG_HPP_
#define TRAJPREF__CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "trajpref/scenegen.hpp"
#include "trajpref/training.hpp"

namespace trajpref
{

/// Artifact locations. Empty entries resolve to fixed names under `work_dir`.
struct RunPaths
{
  std::string work_dir{"run"};
  std::string train_scenes;
  std::string val_scenes;
  std::string pretrained;
  std::string subset;
  std::string finetuned;
  std::string report_dir;
};

struct DataConfig
{
  std::size_t n_scenes{2250};
  double val_fraction{0.1};
  std::vector<MixtureEntry> mixture{default_mixture()};
};

struct PretrainConfig
{
  double learning_rate{1e-3};
  std::size_t epochs{30};
  std::size_t batch_size{16};
  OptimizerKind optimizer{OptimizerKind::adam};
  double momentum{0.0};
  double wta_relax{0.3};
};

struct FinetuneConfig
{
  double learning_rate{1e-5};
  std::size_t epochs{5};
  std::size_t batch_size{1};
  OptimizerKind optimizer{OptimizerKind::sgd};
  double momentum{0.0};
  Objective objective{Objective::simpo};
  Trainable trainable{Trainable::all};
  /// Epochs of the direct-cost objective relative to the SimPO budget.
  std::size_t direct_cost_epoch_factor{5};
};

struct RunConfig
{
  RunPaths paths;
  std::uint64_t seed{7};
  DataConfig data;
  std::size_t hidden{64};
  std::size_t modes{6};  ///< K
  std::size_t oversample_modes{12};
  PretrainConfig pretrain;
  FinetuneConfig finetune;
  SimPOConfig simpo;
  double lambda{1e3};
  double delta{2.5};
  RepellerParams repeller;
  double collision_threshold{1.0};
  std::size_t top_n{6};
  std::size_t threads{1};

  /// Throws ConfigError.
  void validate() const;

  std::filesystem::path train_scenes_path() const;
  std::filesystem::path val_scenes_path() const;
  std::filesystem::path pretrained_path() const;
  std::filesystem::path subset_path() const;
  std::filesystem::path finetuned_path() const;
  std::filesystem::path report_dir() const;

  PredictorDims dims(std::size_t obs_steps, std::size_t fut_steps) const;
  TrainConfig pretrain_config() const;
  TrainConfig finetune_config() const;
};

nlohmann::ordered_json to_json(const RunConfig & config);

/// Strict: unknown keys and wrong types raise ConfigError.
RunConfig run_config_from_json(const nlohmann::json & j);

/// defaults, then `file` (if not empty), then `overrides`, each applied as a JSON
/// merge patch.
RunConfig merge_config(const std::string & file, const nlohmann::json & overrides);

/// SHA-1 of the canonical (key-sorted, compact) JSON of the config.
std::string config_hash(const RunConfig & config);

}  // namespace trajpref

#endif  // TRAJPREF__CONFIG_HPP_

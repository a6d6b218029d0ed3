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

#include "trajpref/config.hpp"

#include <stdexcept>

#include "trajpref/errors.hpp"
#include "trajpref/file_util.hpp"

namespace trajpref
{

using nlohmann::json;
using nlohmann::ordered_json;

namespace
{

std::string trainable_name(Trainable t) { return t == Trainable::all ? "all" : "logit_head"; }

Trainable trainable_from_string(const std::string & s)
{
  if (s == "all") {
    return Trainable::all;
  }
  if (s == "logit_head") {
    return Trainable::logit_head;
  }
  throw ConfigError("unknown trainable set '" + s + "' (all | logit_head)");
}

ordered_json mixture_json(const std::vector<MixtureEntry> & mixture)
{
  ordered_json out = ordered_json::array();
  for (const auto & e : mixture) {
    out.push_back({
      {"kind", to_string(e.spec.kind)},
      {"num_agents", e.spec.num_agents},
      {"speed_min", e.spec.speed_min},
      {"speed_max", e.spec.speed_max},
      {"angle_min", e.spec.angle_min},
      {"angle_max", e.spec.angle_max},
      {"noise_std", e.spec.noise_std},
      {"interaction_prob", e.spec.interaction_prob},
      {"first_arrival_priority", e.spec.first_arrival_priority},
      {"weight", e.weight},
    });
  }
  return out;
}

// Every key of `given` must exist in `reference`; nested objects are checked
// recursively. Arrays are left to the typed readers.
void check_keys(const json & reference, const json & given, const std::string & where)
{
  if (!given.is_object()) {
    throw ConfigError(where.empty() ? "config must be a JSON object" : "'" + where + "' must be an object");
  }
  for (const auto & [key, value] : given.items()) {
    const std::string path = where.empty() ? key : where + "." + key;
    if (!reference.contains(key)) {
      throw ConfigError("unknown config key '" + path + "'");
    }
    if (reference.at(key).is_object()) {
      check_keys(reference.at(key), value, path);
    }
  }
}

template <class T>
T get(const json & j, const std::string & path)
{
  const json * node = &j;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    node = &node->at(path.substr(start, dot - start));
    if (dot == std::string::npos) {
      break;
    }
    start = dot + 1;
  }
  try {
    if constexpr (std::is_same_v<T, std::size_t> || std::is_same_v<T, std::uint64_t>) {
      if (!node->is_number_unsigned()) {
        throw ConfigError("'" + path + "' must be a non-negative integer");
      }
    }
    return node->get<T>();
  } catch (const json::exception &) {
    throw ConfigError("'" + path + "' has the wrong type");
  }
}

std::vector<MixtureEntry> mixture_from_json(const json & j)
{
  if (!j.is_array() || j.empty()) {
    throw ConfigError("'data.mixture' must be a non-empty array");
  }
  const json reference = json(mixture_json(default_mixture())).at(0);
  std::vector<MixtureEntry> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = "data.mixture[" + std::to_string(i) + "]";
    check_keys(reference, j[i], where);
    json entry = reference;
    entry.merge_patch(j[i]);
    MixtureEntry e;
    try {
      e.spec.kind = scenario_kind_from_string(get<std::string>(entry, "kind"));
    } catch (const std::invalid_argument & err) {
      throw ConfigError(where + ": " + err.what());
    }
    e.spec.num_agents = get<int>(entry, "num_agents");
    e.spec.speed_min = get<double>(entry, "speed_min");
    e.spec.speed_max = get<double>(entry, "speed_max");
    e.spec.angle_min = get<double>(entry, "angle_min");
    e.spec.angle_max = get<double>(entry, "angle_max");
    e.spec.noise_std = get<double>(entry, "noise_std");
    e.spec.interaction_prob = get<double>(entry, "interaction_prob");
    e.spec.first_arrival_priority = get<double>(entry, "first_arrival_priority");
    e.weight = get<double>(entry, "weight");
    out.push_back(e);
  }
  return out;
}

std::filesystem::path resolve(const std::string & given, const std::string & work_dir, const char * name)
{
  return given.empty() ? std::filesystem::path(work_dir) / name : std::filesystem::path(given);
}

}  // namespace

void RunConfig::validate() const
{
  auto check = [](bool ok, const std::string & what) {
    if (!ok) {
      throw ConfigError(what);
    }
  };
  check(!paths.work_dir.empty(), "paths.work_dir must not be empty");
  check(data.n_scenes >= 1, "data.n_scenes must be at least 1");
  check(data.val_fraction >= 0.0 && data.val_fraction < 1.0, "data.val_fraction must lie in [0, 1)");
  check(!data.mixture.empty(), "data.mixture must not be empty");
  for (const auto & e : data.mixture) {
    check(e.weight > 0.0, "mixture weights must be positive");
    try {
      e.spec.validate();
    } catch (const std::invalid_argument & err) {
      throw ConfigError(std::string("data.mixture: ") + err.what());
    }
  }
  check(hidden >= 1, "hidden must be at least 1");
  check(modes >= 1, "modes must be at least 1");
  check(modes >= top_n, "modes (K) must be at least top_n");
  check(oversample_modes >= top_n, "oversample_modes must be at least top_n");
  check(top_n >= 1, "top_n must be at least 1");
  check(lambda >= 0.0, "lambda must be non-negative");
  check(delta >= 0.0, "delta must be non-negative");
  check(collision_threshold > 0.0, "collision_threshold must be positive");
  check(threads >= 1, "threads must be at least 1");
  check(finetune.direct_cost_epoch_factor >= 1, "finetune.direct_cost_epoch_factor must be at least 1");
  check(finetune.objective != Objective::pretrain, "finetune.objective must be simpo or direct-cost");
  try {
    pretrain_config().validate();
    finetune_config().validate();
  } catch (const std::invalid_argument & err) {
    throw ConfigError(err.what());
  }
}

std::filesystem::path RunConfig::train_scenes_path() const
{
  return resolve(paths.train_scenes, paths.work_dir, "train.jsonl");
}
std::filesystem::path RunConfig::val_scenes_path() const
{
  return resolve(paths.val_scenes, paths.work_dir, "val.jsonl");
}
std::filesystem::path RunConfig::pretrained_path() const
{
  return resolve(paths.pretrained, paths.work_dir, "pretrained.ckpt");
}
std::filesystem::path RunConfig::subset_path() const
{
  return resolve(paths.subset, paths.work_dir, "subset.txt");
}
std::filesystem::path RunConfig::finetuned_path() const
{
  return resolve(paths.finetuned, paths.work_dir, "finetuned.ckpt");
}
std::filesystem::path RunConfig::report_dir() const
{
  return resolve(paths.report_dir, paths.work_dir, "reports");
}

PredictorDims RunConfig::dims(std::size_t obs_steps, std::size_t fut_steps) const
{
  PredictorDims d;
  d.obs_steps = obs_steps;
  d.fut_steps = fut_steps;
  d.hidden = hidden;
  d.modes = modes;
  return d;
}

TrainConfig RunConfig::pretrain_config() const
{
  TrainConfig c;
  c.objective = Objective::pretrain;
  c.learning_rate = pretrain.learning_rate;
  c.epochs = pretrain.epochs;
  c.batch_size = pretrain.batch_size;
  c.optimizer = pretrain.optimizer;
  c.momentum = pretrain.momentum;
  c.wta_relax = pretrain.wta_relax;
  c.rng_seed = seed;
  c.threads = threads;
  return c;
}

TrainConfig RunConfig::finetune_config() const
{
  TrainConfig c;
  c.objective = finetune.objective;
  c.learning_rate = finetune.learning_rate;
  c.epochs = finetune.epochs;
  c.batch_size = finetune.batch_size;
  c.optimizer = finetune.optimizer;
  c.momentum = finetune.momentum;
  c.trainable = finetune.trainable;
  c.simpo = simpo;
  c.lambda = lambda;
  c.repeller = repeller;
  c.rng_seed = seed;
  c.threads = threads;
  return c;
}

ordered_json to_json(const RunConfig & c)
{
  return {
    {"paths",
     {
       {"work_dir", c.paths.work_dir},
       {"train_scenes", c.paths.train_scenes},
       {"val_scenes", c.paths.val_scenes},
       {"pretrained", c.paths.pretrained},
       {"subset", c.paths.subset},
       {"finetuned", c.paths.finetuned},
       {"report_dir", c.paths.report_dir},
     }},
    {"seed", c.seed},
    {"data",
     {
       {"n_scenes", c.data.n_scenes},
       {"val_fraction", c.data.val_fraction},
       {"mixture", mixture_json(c.data.mixture)},
     }},
    {"hidden", c.hidden},
    {"modes", c.modes},
    {"oversample_modes", c.oversample_modes},
    {"pretrain",
     {
       {"learning_rate", c.pretrain.learning_rate},
       {"epochs", c.pretrain.epochs},
       {"batch_size", c.pretrain.batch_size},
       {"optimizer", to_string(c.pretrain.optimizer)},
       {"momentum", c.pretrain.momentum},
       {"wta_relax", c.pretrain.wta_relax},
     }},
    {"finetune",
     {
       {"learning_rate", c.finetune.learning_rate},
       {"epochs", c.finetune.epochs},
       {"batch_size", c.finetune.batch_size},
       {"optimizer", to_string(c.finetune.optimizer)},
       {"momentum", c.finetune.momentum},
       {"objective", to_string(c.finetune.objective)},
       {"trainable", trainable_name(c.finetune.trainable)},
       {"direct_cost_epoch_factor", c.finetune.direct_cost_epoch_factor},
     }},
    {"beta", c.simpo.beta},
    {"gamma", c.simpo.gamma},
    {"lambda", c.lambda},
    {"delta", c.delta},
    {"repeller_radius", c.repeller.radius},
    {"repeller_epsilon", c.repeller.epsilon},
    {"collision_threshold", c.collision_threshold},
    {"top_n", c.top_n},
    {"threads", c.threads},
  };
}

RunConfig run_config_from_json(const json & j)
{
  const json reference = json(to_json(RunConfig{}));
  check_keys(reference, j, "");
  json m = reference;
  m.merge_patch(j);

  RunConfig c;
  c.paths.work_dir = get<std::string>(m, "paths.work_dir");
  c.paths.train_scenes = get<std::string>(m, "paths.train_scenes");
  c.paths.val_scenes = get<std::string>(m, "paths.val_scenes");
  c.paths.pretrained = get<std::string>(m, "paths.pretrained");
  c.paths.subset = get<std::string>(m, "paths.subset");
  c.paths.finetuned = get<std::string>(m, "paths.finetuned");
  c.paths.report_dir = get<std::string>(m, "paths.report_dir");
  c.seed = get<std::uint64_t>(m, "seed");
  c.data.n_scenes = get<std::size_t>(m, "data.n_scenes");
  c.data.val_fraction = get<double>(m, "data.val_fraction");
  c.data.mixture = mixture_from_json(m.at("data").at("mixture"));
  c.hidden = get<std::size_t>(m, "hidden");
  c.modes = get<std::size_t>(m, "modes");
  c.oversample_modes = get<std::size_t>(m, "oversample_modes");
  c.pretrain.learning_rate = get<double>(m, "pretrain.learning_rate");
  c.pretrain.epochs = get<std::size_t>(m, "pretrain.epochs");
  c.pretrain.batch_size = get<std::size_t>(m, "pretrain.batch_size");
  c.pretrain.momentum = get<double>(m, "pretrain.momentum");
  c.pretrain.wta_relax = get<double>(m, "pretrain.wta_relax");
  c.finetune.learning_rate = get<double>(m, "finetune.learning_rate");
  c.finetune.epochs = get<std::size_t>(m, "finetune.epochs");
  c.finetune.batch_size = get<std::size_t>(m, "finetune.batch_size");
  c.finetune.momentum = get<double>(m, "finetune.momentum");
  c.finetune.direct_cost_epoch_factor = get<std::size_t>(m, "finetune.direct_cost_epoch_factor");
  c.finetune.trainable = trainable_from_string(get<std::string>(m, "finetune.trainable"));
  try {
    c.pretrain.optimizer = optimizer_from_string(get<std::string>(m, "pretrain.optimizer"));
    c.finetune.optimizer = optimizer_from_string(get<std::string>(m, "finetune.optimizer"));
    c.finetune.objective = objective_from_string(get<std::string>(m, "finetune.objective"));
  } catch (const std::invalid_argument & err) {
    throw ConfigError(err.what());
  }
  c.simpo.beta = get<double>(m, "beta");
  c.simpo.gamma = get<double>(m, "gamma");
  c.lambda = get<double>(m, "lambda");
  c.delta = get<double>(m, "delta");
  c.repeller.radius = get<double>(m, "repeller_radius");
  c.repeller.epsilon = get<double>(m, "repeller_epsilon");
  c.collision_threshold = get<double>(m, "collision_threshold");
  c.top_n = get<std::size_t>(m, "top_n");
  c.threads = get<std::size_t>(m, "threads");
  c.validate();
  return c;
}

RunConfig merge_config(const std::string & file, const json & overrides)
{
  json merged = json::object();
  if (!file.empty()) {
    std::string text;
    try {
      text = read_text_file(file);
    } catch (const MissingArtifactError &) {
      throw ConfigError("config file not found: " + file);
    }
    try {
      merged = json::parse(text);
    } catch (const json::parse_error & err) {
      throw ConfigError("config file " + file + " is not valid JSON: " + err.what());
    }
    if (!merged.is_object()) {
      throw ConfigError("config file " + file + " must hold a JSON object");
    }
  }
  merged.merge_patch(overrides);
  return run_config_from_json(merged);
}

std::string config_hash(const RunConfig & config)
{
  return sha1_hex(json(to_json(config)).dump());
}

}  // namespace trajpref

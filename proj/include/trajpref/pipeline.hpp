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

#ifndef TRAJPREF__PIPELINE_HPP_
#define TRAJPREF__PIPELINE_HPP_

#include <cstddef>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "trajpref/config.hpp"
#include "trajpref/metrics.hpp"
#include "trajpref/predictor.hpp"
#include "trajpref/preference.hpp"
#include "trajpref/scene.hpp"
#include "trajpref/training.hpp"

namespace trajpref
{

struct DatasetSplit
{
  std::vector<Scene> train;
  std::vector<Scene> val;
  std::map<std::string, std::size_t> kind_counts;
};

/// Generates `data.n_scenes` scenes; the last round(n * val_fraction) form the
/// validation split.
DatasetSplit generate_split(const RunConfig & config);

/// Fresh model with `modes` heads, pretrained on `train`.
PredictorParams pretrain_model(
  const RunConfig & config, std::span<const Scene> train, std::size_t modes,
  TrainHistory * history = nullptr);

ExtractionResult extract_subset(
  const RunConfig & config, const PredictorParams & params, std::span<const Scene> train);

/// Scenes of `pool` named in `ids`, in pool order. Throws ValidationError for
/// an id that is not in the pool.
std::vector<Scene> select_scenes(std::span<const Scene> pool, std::span<const std::string> ids);

/// Epochs actually run: the configured count, times the direct-cost factor for
/// the direct-cost objective.
std::size_t finetune_epochs(const RunConfig & config);

TrainHistory finetune_model(const RunConfig & config, PredictorParams & params, std::span<const Scene> subset);

EvalOptions eval_options(const RunConfig & config);

struct FinetuneOutcome
{
  ExtractionSummary extraction;
  TrainHistory history;
  MetricsReport before;
  MetricsReport after;
  std::vector<MetricChange> changes;
  RealismCheck realism_after;
};

/// Extract from `train`, fine-tune a copy of `pretrained` and evaluate both on `val`.
FinetuneOutcome run_finetune_experiment(
  const RunConfig & config, const PredictorParams & pretrained, std::span<const Scene> train,
  std::span<const Scene> val);

std::string history_csv(const TrainHistory & history);

struct CommandOptions
{
  bool force{false};
  std::ostream * log{nullptr};
};

void cmd_gen(const RunConfig & config, const CommandOptions & options);
void cmd_pretrain(const RunConfig & config, const CommandOptions & options);
void cmd_extract(const RunConfig & config, const CommandOptions & options);
void cmd_finetune(const RunConfig & config, const CommandOptions & options);

struct EvalRequest
{
  std::string before;       ///< defaults to the pretrained checkpoint
  std::string after;        ///< defaults to the fine-tuned checkpoint
  std::string checkpoint;   ///< single-model evaluation
  std::string predictions;  ///< evaluate a stored prediction dump instead
  std::string dump_predictions;  ///< write the single model's predictions here
};

void cmd_eval(const RunConfig & config, const EvalRequest & request, const CommandOptions & options);

struct AblationRow
{
  std::string param;
  double value{0.0};
  FinetuneOutcome outcome;
};

/// One fine-tune and evaluation per value. `param` is gamma, lambda or K; for K
/// a model with that many modes is pretrained first.
std::vector<AblationRow> run_ablation(
  const RunConfig & config, const std::string & param, std::span<const double> values,
  const PredictorParams * base_pretrained, std::span<const Scene> train, std::span<const Scene> val,
  const CommandOptions & options);

std::string ablation_csv(std::span<const AblationRow> rows);

void cmd_ablate(
  const RunConfig & config, const std::string & param, const std::vector<double> & values,
  const CommandOptions & options);

/// Collects existing artifacts into `<report_dir>/summary.md` and prints it.
void cmd_report(const RunConfig & config, const CommandOptions & options);

}  // namespace trajpref

#endif  // TRAJPREF__PIPELINE_HPP_

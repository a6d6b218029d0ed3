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

#include "trajpref/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "trajpref/aggregation.hpp"
#include "trajpref/checkpoint.hpp"
#include "trajpref/errors.hpp"
#include "trajpref/file_util.hpp"
#include "trajpref/manifest.hpp"
#include "trajpref/scene_io.hpp"
#include "trajpref/scenegen.hpp"

namespace trajpref
{

using nlohmann::json;
using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace
{

void note(const CommandOptions & options, const std::string & line)
{
  if (options.log != nullptr) {
    *options.log << line << '\n';
  }
}

class Stopwatch
{
public:
  double seconds() const
  {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_{std::chrono::steady_clock::now()};
};

RunManifest make_manifest(
  const std::string & command, const RunConfig & config, std::map<std::string, std::string> inputs)
{
  RunManifest m;
  m.command = command;
  m.config_hash = config_hash(config);
  m.seed = config.seed;
  m.inputs = std::move(inputs);
  m.config = to_json(config);
  return m;
}

void finish_manifest(RunManifest & m, const fs::path & anchor, const std::vector<fs::path> & outputs, double t)
{
  m.outputs = hash_files(outputs, m.command);
  m.wall_time_s = t;
  write_manifest(manifest_path(anchor), m);
}

bool skip_if_current(
  const std::string & command, const fs::path & anchor, const RunConfig & config,
  const std::map<std::string, std::string> & inputs, const CommandOptions & options)
{
  if (!options.force && manifest_up_to_date(manifest_path(anchor), config_hash(config), inputs)) {
    note(options, command + ": outputs are up to date (use --force to recompute)");
    return true;
  }
  return false;
}

std::vector<Scene> load_scenes(const fs::path & path, const std::string & step)
{
  if (!fs::exists(path)) {
    throw MissingArtifactError(path.string() + " does not exist; run '" + step + "' first");
  }
  return read_scenes(path);
}

PredictorParams load_model(const fs::path & path, const std::string & step)
{
  if (!fs::exists(path)) {
    throw MissingArtifactError(path.string() + " does not exist; run '" + step + "' first");
  }
  return load_checkpoint(path);
}

std::string fmt(double v, int digits)
{
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

ordered_json realism_json(const RealismCheck & r)
{
  return {
    {"max_speed_z", r.max_speed_z},
    {"collapse_fraction", r.collapse_fraction},
    {"collapse_distance", r.collapse_distance},
    {"passed", r.passed()},
  };
}

std::string value_label(double v)
{
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

DatasetSplit generate_split(const RunConfig & config)
{
  GeneratedDataset ds = generate_dataset(config.data.mixture, config.data.n_scenes, config.seed);
  const auto n = ds.scenes.size();
  const auto n_val = static_cast<std::size_t>(std::llround(static_cast<double>(n) * config.data.val_fraction));
  if (n_val >= n) {
    throw ConfigError("data.val_fraction leaves no training scenes");
  }
  DatasetSplit out;
  out.train.assign(ds.scenes.begin(), ds.scenes.end() - static_cast<std::ptrdiff_t>(n_val));
  out.val.assign(ds.scenes.end() - static_cast<std::ptrdiff_t>(n_val), ds.scenes.end());
  out.kind_counts = std::move(ds.kind_counts);
  return out;
}


PredictorParams pretrain_model(
  const RunConfig & config, std::span<const Scene> scenes, std::size_t modes, TrainHistory * history)
{
  if (scenes.empty()) {
    throw ValidationError("no training scenes");
  }
  PredictorDims dims = config.dims(scenes.front().obs_steps(), scenes.front().horizon);
  dims.modes = modes;
  PredictorParams params = PredictorParams::initialize(dims, config.seed);
  TrainHistory h = train(params, scenes, config.pretrain_config());
  if (history != nullptr) {
    *history = std::move(h);
  }
  return params;
}

ExtractionResult extract_subset(
  const RunConfig & config, const PredictorParams & params, std::span<const Scene> scenes)
{
  std::vector<SceneAssessment> assessed;
  assessed.reserve(scenes.size());
  for (const auto & scene : scenes) {
    const JointModeSet joint = aggregate_to_joint(forward(params, scene));
    assessed.push_back(assess_scene(
      scene.scene_id, joint, scene.ground_truth_futures, config.lambda, config.repeller,
      config.collision_threshold));
  }
  ExtractionConfig ec;
  ec.delta = config.delta;
  ec.collision_threshold = config.collision_threshold;
  return extract_preference_subset(assessed, ec);
}

std::vector<Scene> select_scenes(std::span<const Scene> pool, std::span<const std::string> ids)
{
  std::set<std::string> wanted(ids.begin(), ids.end());
  std::vector<Scene> out;
  for (const auto & scene : pool) {
    if (wanted.erase(scene.scene_id) > 0) {
      out.push_back(scene);
    }
  }
  if (!wanted.empty()) {
    throw ValidationError("subset names scene '" + *wanted.begin() + "' which is not in the training split");
  }
  return out;
}

std::size_t finetune_epochs(const RunConfig & config)
{
  const auto & f = config.finetune;
  return f.objective == Objective::direct_cost ? f.epochs * f.direct_cost_epoch_factor : f.epochs;
}

TrainHistory finetune_model(const RunConfig & config, PredictorParams & params, std::span<const Scene> subset)
{
  if (subset.empty()) {
    throw ValidationError("the preference subset is empty; nothing to fine-tune on");
  }
  TrainConfig tc = config.finetune_config();
  tc.epochs = finetune_epochs(config);
  return train(params, subset, tc);
}

EvalOptions eval_options(const RunConfig & config)
{
  EvalOptions o;
  o.top_n = config.top_n;
  o.collision_threshold = config.collision_threshold;
  return o;
}

FinetuneOutcome run_finetune_experiment(
  const RunConfig & config, const PredictorParams & pretrained, std::span<const Scene> scenes,
  std::span<const Scene> val)
{
  FinetuneOutcome out;
  const ExtractionResult extraction = extract_subset(config, pretrained, scenes);
  out.extraction = extraction.summary;
  const std::vector<Scene> subset = select_scenes(scenes, extraction.scene_ids);
  PredictorParams tuned = pretrained;
  out.history = finetune_model(config, tuned, subset);
  const EvalOptions eo = eval_options(config);
  out.before = evaluate_dataset(val, pretrained, eo);
  out.after = evaluate_dataset(val, tuned, eo);
  out.changes = compare_reports(out.before, out.after);
  out.realism_after = check_realism(val, tuned);
  return out;
}

std::string history_csv(const TrainHistory & history)
{
  std::ostringstream os;
  os << std::setprecision(17) << "epoch,steps,mean_loss,mean_reward_gap\n";
  for (const auto & e : history.epochs) {
    os << e.epoch << ',' << e.steps << ',' << e.mean_loss << ',' << e.mean_reward_gap << '\n';
  }
  return os.str();
}

void cmd_gen(const RunConfig & config, const CommandOptions & options)
{
  const fs::path train_path = config.train_scenes_path();
  const fs::path val_path = config.val_scenes_path();
  if (skip_if_current("gen", train_path, config, {}, options)) {
    return;
  }
  Stopwatch clock;
  const DatasetSplit split = generate_split(config);
  if (split.val.empty()) {
    note(options, "warning: validation split is empty (data.val_fraction = " + value_label(config.data.val_fraction) + ")");
  }
  write_scenes(train_path, split.train);
  write_scenes(val_path, split.val);

  RunManifest m = make_manifest("gen", config, {});
  m.extra = {
    {"n", config.data.n_scenes},
    {"n_train", split.train.size()},
    {"n_val", split.val.size()},
    {"kind_counts", split.kind_counts},
    {"specs", to_json(config)["data"]["mixture"]},
  };
  finish_manifest(m, train_path, {train_path, val_path}, clock.seconds());
  std::ostringstream os;
  os << "gen: " << split.train.size() << " train / " << split.val.size() << " val scenes;";
  for (const auto & [kind, count] : split.kind_counts) {
    os << ' ' << kind << '=' << count;
  }
  note(options, os.str());
}

void cmd_pretrain(const RunConfig & config, const CommandOptions & options)
{
  const fs::path train_path = config.train_scenes_path();
  const fs::path out = config.pretrained_path();
  const auto inputs = hash_files({train_path}, "gen");
  if (skip_if_current("pretrain", out, config, inputs, options)) {
    return;
  }
  Stopwatch clock;
  const std::vector<Scene> scenes = load_scenes(train_path, "gen");
  TrainHistory history;
  const PredictorParams params = pretrain_model(config, scenes, config.modes, &history);
  save_checkpoint(out, params);
  const fs::path log_path = out.string() + ".history.csv";
  write_text_file(log_path, history_csv(history));
  RunManifest m = make_manifest("pretrain", config, inputs);
  m.extra = {{"parameter_count", params.parameter_count()}, {"optimizer", to_string(config.pretrain.optimizer)}};
  finish_manifest(m, out, {out, log_path}, clock.seconds());
  note(
    options, "pretrain: " + std::to_string(history.epochs.size()) + " epochs, final loss " +
               fmt(history.epochs.back().mean_loss, 4) + " -> " + out.string());
}

void cmd_extract(const RunConfig & config, const CommandOptions & options)
{
  const fs::path train_path = config.train_scenes_path();
  const fs::path ckpt = config.pretrained_path();
  const fs::path out = config.subset_path();
  const auto inputs = hash_files({train_path, ckpt}, "pretrain");
  if (skip_if_current("extract", out, config, inputs, options)) {
    return;
  }
  Stopwatch clock;
  const std::vector<Scene> scenes = load_scenes(train_path, "gen");
  const PredictorParams params = load_model(ckpt, "pretrain");
  const ExtractionResult result = extract_subset(config, params, scenes);
  write_subset(out, result);
  RunManifest m = make_manifest("extract", config, inputs);
  m.extra = {{"fraction", result.summary.fraction}, {"extracted", result.summary.extracted}};
  finish_manifest(m, out, {out, subset_summary_path(out)}, clock.seconds());
  const auto & s = result.summary;
  note(
    options, "extract: " + std::to_string(s.extracted) + " of " + std::to_string(s.total) + " scenes (" +
               fmt(100.0 * s.fraction, 1) + "%; collision " + std::to_string(s.collision_branch_count) +
               ", spread " + std::to_string(s.spread_branch_count) + ")");
  if (s.fraction < 0.05 || s.fraction > 0.35) {
    note(options, "warning: extraction fraction is outside [5%, 35%]; consider adjusting delta");
  }
}

void cmd_finetune(const RunConfig & config, const CommandOptions & options)
{
  const fs::path train_path = config.train_scenes_path();
  const fs::path ckpt = config.pretrained_path();
  const fs::path subset_path = config.subset_path();
  const fs::path out = config.finetuned_path();
  if (!fs::exists(subset_path)) {
    throw MissingArtifactError(subset_path.string() + " does not exist; run 'extract' first");
  }
  const auto inputs = hash_files({train_path, ckpt, subset_path}, "extract");
  if (skip_if_current("finetune", out, config, inputs, options)) {
    return;
  }
  Stopwatch clock;
  const std::vector<Scene> scenes = load_scenes(train_path, "gen");
  PredictorParams params = load_model(ckpt, "pretrain");
  const std::vector<std::string> ids = read_subset(subset_path);
  const std::vector<Scene> subset = select_scenes(scenes, ids);
  const TrainHistory history = finetune_model(config, params, subset);
  save_checkpoint(out, params);
  const fs::path log_path = out.string() + ".history.csv";
  write_text_file(log_path, history_csv(history));
  RunManifest m = make_manifest("finetune", config, inputs);
  m.extra = {
    {"objective", to_string(config.finetune.objective)},
    {"optimizer", to_string(config.finetune.optimizer)},
    {"momentum", config.finetune.momentum},
    {"epochs", finetune_epochs(config)},
    {"steps", history.total_steps},
  };
  finish_manifest(m, out, {out, log_path}, clock.seconds());
  for (const auto & e : history.epochs) {
    note(
      options, "finetune: epoch " + std::to_string(e.epoch) + " loss " + fmt(e.mean_loss, 4) + " reward gap " +
                 fmt(e.mean_reward_gap, 4));
  }
  note(options, "finetune: " + std::to_string(history.total_steps) + " steps -> " + out.string());
}

void cmd_eval(const RunConfig & config, const EvalRequest & request, const CommandOptions & options)
{
  const fs::path val_path = config.val_scenes_path();
  const fs::path dir = config.report_dir();
  const EvalOptions eo = eval_options(config);
  Stopwatch clock;

  auto write_single = [&](const std::string & tag, const MetricsReport & report, const RealismCheck * realism) {
    ordered_json j = ordered_json::parse(report_json(report));
    if (realism != nullptr) {
      j["realism"] = realism_json(*realism);
    }
    const fs::path json_path = dir / ("eval_" + tag + ".json");
    const fs::path csv_path = dir / ("eval_" + tag + "_scenes.csv");
    write_text_file(json_path, j.dump(2) + "\n");
    write_text_file(csv_path, report_table_csv(report));
    return std::vector<fs::path>{json_path, csv_path};
  };

  if (!request.predictions.empty()) {
    const auto inputs = hash_files({val_path, request.predictions}, "eval");
    const std::vector<Scene> val = load_scenes(val_path, "gen");
    const PredictionMap preds = read_predictions(request.predictions);
    const MetricsReport report = evaluate_dataset(val, preds, eo);
    auto outputs = write_single("predictions", report, nullptr);
    RunManifest m = make_manifest("eval", config, inputs);
    finish_manifest(m, outputs.front(), outputs, clock.seconds());
    note(options, report_text(report));
    return;
  }

  if (!request.checkpoint.empty()) {
    const auto inputs = hash_files({val_path, request.checkpoint}, "pretrain");
    const std::vector<Scene> val = load_scenes(val_path, "gen");
    const PredictorParams params = load_model(request.checkpoint, "pretrain");
    const MetricsReport report = evaluate_dataset(val, params, eo);
    const RealismCheck realism = check_realism(val, params);
    auto outputs = write_single("checkpoint", report, &realism);
    if (!request.dump_predictions.empty()) {
      std::vector<std::string> ids;
      std::vector<MarginalPrediction> preds;
      for (const auto & scene : val) {
        ids.push_back(scene.scene_id);
        preds.push_back(forward(params, scene));
      }
      write_predictions(request.dump_predictions, ids, preds);
      outputs.emplace_back(request.dump_predictions);
    }
    RunManifest m = make_manifest("eval", config, inputs);
    finish_manifest(m, outputs.front(), outputs, clock.seconds());
    note(options, report_text(report));
    return;
  }

  const fs::path before_path = request.before.empty() ? config.pretrained_path() : fs::path(request.before);
  const fs::path after_path = request.after.empty() ? config.finetuned_path() : fs::path(request.after);
  hash_files({val_path}, "gen");
  hash_files({before_path}, "pretrain");  // name the earliest missing step
  const auto inputs = hash_files({val_path, before_path, after_path}, "finetune");
  const fs::path comparison_path = dir / "comparison.json";
  if (skip_if_current("eval", comparison_path, config, inputs, options)) {
    note(options, read_text_file(dir / "comparison.txt"));
    return;
  }
  const std::vector<Scene> val = load_scenes(val_path, "gen");
  if (val.empty()) {
    note(options, "warning: validation split is empty; all metrics are zero");
  }
  const PredictorParams before = load_model(before_path, "pretrain");
  const PredictorParams after = load_model(after_path, "finetune");
  const MetricsReport rb = evaluate_dataset(val, before, eo);
  const MetricsReport ra = evaluate_dataset(val, after, eo);
  const RealismCheck realism_b = check_realism(val, before);
  const RealismCheck realism_a = check_realism(val, after);
  auto outputs = write_single("before", rb, &realism_b);
  const auto more = write_single("after", ra, &realism_a);
  outputs.insert(outputs.end(), more.begin(), more.end());
  const auto changes = compare_reports(rb, ra);
  write_text_file(comparison_path, comparison_json(changes));
  write_text_file(dir / "comparison.txt", comparison_text(changes));
  outputs.push_back(comparison_path);
  outputs.push_back(dir / "comparison.txt");
  RunManifest m = make_manifest("eval", config, inputs);
  finish_manifest(m, comparison_path, outputs, clock.seconds());
  note(options, comparison_text(changes));
}

std::vector<AblationRow> run_ablation(
  const RunConfig & config, const std::string & param, std::span<const double> values,
  const PredictorParams * base_pretrained, std::span<const Scene> scenes, std::span<const Scene> val,
  const CommandOptions & options)
{
  if (values.empty()) {
    throw ConfigError("ablation needs at least one value");
  }
  if (param != "gamma" && param != "lambda" && param != "K") {
    throw ConfigError("unknown ablation parameter '" + param + "' (gamma | lambda | K)");
  }
  std::vector<AblationRow> rows;
  for (const double v : values) {
    RunConfig c = config;
    PredictorParams pretrained;
    if (param == "gamma") {
      c.simpo.gamma = v;
    } else if (param == "lambda") {
      c.lambda = v;
    } else {
      if (!(v >= 1.0) || v != std::floor(v)) {
        throw ConfigError("K values must be positive integers");
      }
      c.modes = static_cast<std::size_t>(v);
    }
    try {
      c.validate();
    } catch (const ConfigError & err) {
      throw ConfigError(param + " = " + value_label(v) + ": " + err.what());
    }
    if (param == "K") {
      if (base_pretrained != nullptr && base_pretrained->dims.modes == c.modes) {
        pretrained = *base_pretrained;
      } else {
        note(options, "ablate: pretraining a " + value_label(v) + "-mode model");
        pretrained = pretrain_model(c, scenes, c.modes);
      }
    } else {
      if (base_pretrained == nullptr) {
        throw MissingArtifactError("ablation needs a pretrained checkpoint; run 'pretrain' first");
      }
      pretrained = *base_pretrained;
    }
    AblationRow row{param, v, run_finetune_experiment(c, pretrained, scenes, val)};
    note(
      options, "ablate: " + param + " = " + value_label(v) + "  scr " + fmt(row.outcome.changes[0].relative_change_percent, 1) +
                 "%  pscr " + fmt(row.outcome.changes[1].relative_change_percent, 1) + "%  minJointFDE " +
                 fmt(row.outcome.changes[2].relative_change_percent, 1) + "%");
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string ablation_csv(std::span<const AblationRow> rows)
{
  std::ostringstream os;
  os << std::setprecision(17);
  os << "param,value,extracted,extraction_fraction,steps,reward_gap_first,reward_gap_last";
  for (const char * name : {"scr", "pscr", "min_joint_fde", "avg_fde"}) {
    os << ',' << name << "_before," << name << "_after," << name << "_change_percent";
  }
  os << ",max_speed_z,collapse_fraction\n";
  for (const auto & r : rows) {
    const auto & o = r.outcome;
    os << r.param << ',' << r.value << ',' << o.extraction.extracted << ',' << o.extraction.fraction << ','
       << o.history.total_steps << ',' << o.history.epochs.front().mean_reward_gap << ','
       << o.history.epochs.back().mean_reward_gap;
    for (const auto & c : o.changes) {
      os << ',' << c.before << ',' << c.after << ',';
      if (std::isfinite(c.relative_change_percent)) {
        os << c.relative_change_percent;
      }
    }
    os << ',' << o.realism_after.max_speed_z << ',' << o.realism_after.collapse_fraction << '\n';
  }
  return os.str();
}

void cmd_ablate(
  const RunConfig & config, const std::string & param, const std::vector<double> & values,
  const CommandOptions & options)
{
  if (values.empty()) {
    throw ConfigError("ablation needs at least one value");
  }
  if (param != "gamma" && param != "lambda" && param != "K") {
    throw ConfigError("unknown ablation parameter '" + param + "' (gamma | lambda | K)");
  }
  const fs::path train_path = config.train_scenes_path();
  const fs::path val_path = config.val_scenes_path();
  const fs::path ckpt = config.pretrained_path();
  auto inputs = hash_files({train_path, val_path}, "gen");
  if (param != "K") {
    inputs.merge(hash_files({ckpt}, "pretrain"));
  }
  std::string label = param + ":";
  for (const double v : values) {
    label += ' ' + value_label(v);
  }
  inputs["sweep"] = label;
  const fs::path out = config.report_dir() / ("ablate_" + param + ".csv");
  if (skip_if_current("ablate", out, config, inputs, options)) {
    note(options, read_text_file(out));
    return;
  }
  Stopwatch clock;
  const std::vector<Scene> scenes = load_scenes(train_path, "gen");
  const std::vector<Scene> val = load_scenes(val_path, "gen");
  std::optional<PredictorParams> base;
  if (fs::exists(ckpt)) {
    base = load_checkpoint(ckpt);
  }
  const auto rows = run_ablation(config, param, values, base ? &*base : nullptr, scenes, val, options);
  write_text_file(out, ablation_csv(rows));
  RunManifest m = make_manifest("ablate", config, inputs);
  m.extra = {{"param", param}, {"values", values}};
  finish_manifest(m, out, {out}, clock.seconds());
  note(options, "ablate: table -> " + out.string());
}

void cmd_report(const RunConfig & config, const CommandOptions & options)
{
  const fs::path dir = config.report_dir();
  std::ostringstream md;
  md << "# Run report\n\n";
  bool any = false;

  if (const auto gen = read_manifest(manifest_path(config.train_scenes_path()))) {
    any = true;
    md << "## Data\n\n"
       << "seed " << gen->seed << ", " << gen->extra.value("n_train", 0) << " train / "
       << gen->extra.value("n_val", 0) << " val scenes\n\n";
    for (const auto & [kind, count] : gen->extra.at("kind_counts").items()) {
      md << "- " << kind << ": " << count.get<std::size_t>() << '\n';
    }
    md << '\n';
  }
  const fs::path summary = subset_summary_path(config.subset_path());
  if (fs::exists(summary)) {
    any = true;
    const auto s = json::parse(read_text_file(summary));
    md << "## Preference subset\n\n"
       << s.at("extracted").get<std::size_t>() << " of " << s.at("total").get<std::size_t>() << " scenes ("
       << fmt(100.0 * s.at("fraction").get<double>(), 1) << "%), collision branch "
       << s.at("collision_branch_count").get<std::size_t>() << ", spread branch "
       << s.at("spread_branch_count").get<std::size_t>() << "\n\n";
  }
  const fs::path history = config.finetuned_path().string() + ".history.csv";
  if (fs::exists(history)) {
    any = true;
    md << "## Fine-tuning history\n\n```\n" << read_text_file(history) << "```\n\n";
  }
  if (fs::exists(dir / "comparison.txt")) {
    any = true;
    md << "## Validation metrics\n\n```\n" << read_text_file(dir / "comparison.txt") << "```\n\n";
  }
  for (const char * p : {"gamma", "lambda", "K"}) {
    const fs::path table = dir / (std::string("ablate_") + p + ".csv");
    if (fs::exists(table)) {
      any = true;
      md << "## Ablation: " << p << "\n\n```\n" << read_text_file(table) << "```\n\n";
    }
  }
  if (!any) {
    throw MissingArtifactError("no artifacts under " + config.paths.work_dir + "; run 'gen' first");
  }
  write_text_file(dir / "summary.md", md.str());
  note(options, md.str());
}

}  // namespace trajpref

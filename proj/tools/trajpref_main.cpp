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

#include <functional>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "trajpref/config.hpp"
#include "trajpref/errors.hpp"
#include "trajpref/pipeline.hpp"

namespace
{

using nlohmann::json;

enum ExitCode { kOk = 0, kFailure = 1, kConfigError = 2, kMissingArtifact = 3, kValidationFailure = 4 };

// Flags that map onto config keys; only flags actually given end up in the
// override patch.
class Overrides
{
public:
  template <class T>
  void add(CLI::App & app, const std::string & flag, const std::string & key, const std::string & help)
  {
    auto value = std::make_shared<T>();
    CLI::Option * opt = app.add_option(flag, *value, help);
    setters_.push_back([opt, value, key](json & patch) {
      if (opt->count() == 0) {
        return;
      }
      json * node = &patch;
      std::size_t start = 0;
      for (auto dot = key.find('.'); dot != std::string::npos; dot = key.find('.', start)) {
        node = &(*node)[key.substr(start, dot - start)];
        start = dot + 1;
      }
      (*node)[key.substr(start)] = *value;
    });
  }

  json patch() const
  {
    json p = json::object();
    for (const auto & set : setters_) {
      set(p);
    }
    return p;
  }

private:
  std::vector<std::function<void(json &)>> setters_;
};

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Preference fine-tuning pipeline for multi-agent trajectory prediction"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_file;
  bool force = false;
  app.add_option("-c,--config", config_file, "JSON run configuration");
  app.add_flag("--force", force, "recompute outputs even when they are up to date");

  Overrides o;
  o.add<std::string>(app, "--work-dir", "paths.work_dir", "directory for all artifacts");
  o.add<std::string>(app, "--train-scenes", "paths.train_scenes", "training scene file");
  o.add<std::string>(app, "--val-scenes", "paths.val_scenes", "validation scene file");
  o.add<std::string>(app, "--pretrained", "paths.pretrained", "pretrained checkpoint");
  o.add<std::string>(app, "--subset", "paths.subset", "preference subset file");
  o.add<std::string>(app, "--finetuned", "paths.finetuned", "fine-tuned checkpoint");
  o.add<std::string>(app, "--report-dir", "paths.report_dir", "report directory");
  o.add<std::uint64_t>(app, "--seed", "seed", "master seed");
  o.add<std::size_t>(app, "--n-scenes", "data.n_scenes", "scenes to generate");
  o.add<double>(app, "--val-fraction", "data.val_fraction", "validation share of generated scenes");
  o.add<std::size_t>(app, "--hidden", "hidden", "hidden width of the predictor");
  o.add<std::size_t>(app, "-K,--modes", "modes", "modes decoded per agent");
  o.add<std::size_t>(app, "--oversample-modes", "oversample_modes", "K used for oversampling runs");
  o.add<double>(app, "--pretrain-lr", "pretrain.learning_rate", "pretraining learning rate");
  o.add<std::size_t>(app, "--pretrain-epochs", "pretrain.epochs", "pretraining epochs");
  o.add<std::size_t>(app, "--pretrain-batch-size", "pretrain.batch_size", "pretraining batch size");
  o.add<std::string>(app, "--pretrain-optimizer", "pretrain.optimizer", "sgd | adam");
  o.add<double>(app, "--wta-relax", "pretrain.wta_relax", "regression weight spread to non-winning modes");
  o.add<double>(app, "--lr", "finetune.learning_rate", "fine-tuning learning rate");
  o.add<std::size_t>(app, "--epochs", "finetune.epochs", "fine-tuning epochs");
  o.add<std::size_t>(app, "--batch-size", "finetune.batch_size", "fine-tuning batch size");
  o.add<std::string>(app, "--optimizer", "finetune.optimizer", "sgd | adam");
  o.add<double>(app, "--momentum", "finetune.momentum", "SGD momentum for fine-tuning");
  o.add<std::string>(app, "--objective", "finetune.objective", "simpo | direct-cost");
  o.add<std::string>(app, "--trainable", "finetune.trainable", "all | logit_head");
  o.add<double>(app, "--beta", "beta", "reward scale");
  o.add<double>(app, "--gamma", "gamma", "reward margin per rank");
  o.add<double>(app, "--lambda", "lambda", "repeller weight in the preference cost");
  o.add<double>(app, "--delta", "delta", "cost-spread extraction threshold [m]");
  o.add<double>(app, "--repeller-radius", "repeller_radius", "repeller radius r [m]");
  o.add<double>(app, "--repeller-epsilon", "repeller_epsilon", "repeller epsilon");
  o.add<double>(app, "--collision-threshold", "collision_threshold", "collision distance [m]");
  o.add<std::size_t>(app, "--top-n", "top_n", "joint modes evaluated");
  o.add<std::size_t>(app, "--threads", "threads", "worker threads for per-scene gradients");

  auto * gen = app.add_subcommand("gen", "generate train/val scene files");
  auto * pretrain = app.add_subcommand("pretrain", "pretrain the predictor");
  auto * extract = app.add_subcommand("extract", "rank modes and extract the preference subset");
  auto * finetune = app.add_subcommand("finetune", "fine-tune on the preference subset");
  auto * eval = app.add_subcommand("eval", "evaluate checkpoints on the validation split");
  auto * ablate = app.add_subcommand("ablate", "sweep gamma, lambda or K");
  auto * report = app.add_subcommand("report", "summarize existing artifacts");

  trajpref::EvalRequest eval_request;
  eval->add_option("--before", eval_request.before, "baseline checkpoint (default: pretrained)");
  eval->add_option("--after", eval_request.after, "compared checkpoint (default: fine-tuned)");
  eval->add_option("--checkpoint", eval_request.checkpoint, "evaluate one checkpoint");
  eval->add_option("--predictions", eval_request.predictions, "evaluate a stored prediction dump");
  eval->add_option("--dump-predictions", eval_request.dump_predictions, "with --checkpoint: write predictions");

  std::string param;
  std::vector<double> values;
  ablate->add_option("--param", param, "gamma | lambda | K")->required();
  ablate->add_option("--values", values, "comma-separated values")->required()->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    const trajpref::RunConfig config = trajpref::merge_config(config_file, o.patch());
    const trajpref::CommandOptions options{force, &std::cout};
    if (*gen) {
      trajpref::cmd_gen(config, options);
    } else if (*pretrain) {
      trajpref::cmd_pretrain(config, options);
    } else if (*extract) {
      trajpref::cmd_extract(config, options);
    } else if (*finetune) {
      trajpref::cmd_finetune(config, options);
    } else if (*eval) {
      trajpref::cmd_eval(config, eval_request, options);
    } else if (*ablate) {
      trajpref::cmd_ablate(config, param, values, options);
    } else if (*report) {
      trajpref::cmd_report(config, options);
    }
  } catch (const trajpref::ConfigError & e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const trajpref::MissingArtifactError & e) {
    std::cerr << "missing artifact: " << e.what() << '\n';
    return kMissingArtifact;
  } catch (const trajpref::ValidationError & e) {
    std::cerr << "validation failure: " << e.what() << '\n';
    return kValidationFailure;
  } catch (const trajpref::ParseError & e) {
    std::cerr << "validation failure: " << e.what() << '\n';
    return kValidationFailure;
  } catch (const std::invalid_argument & e) {
    std::cerr << "validation failure: " << e.what() << '\n';
    return kValidationFailure;
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}

/*
 * Copyright 2026 The Herald Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


// herald: command-line front end.
//
// Direct subcommands operate on explicit files; `run` drives the configured
// pipeline stage by stage and records manifests. Exit codes: 0 success,
// 2 usage or config error, 3 missing prerequisite, 4 data validation error,
// 1 anything else.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "herald/corpus.h"
#include "herald/denoiser.h"
#include "herald/dialog_act_client.h"
#include "herald/embedding.h"
#include "herald/error.h"
#include "herald/experiments.h"
#include "herald/file_util.h"
#include "herald/heuristics.h"
#include "herald/metrics.h"
#include "herald/model.h"
#include "herald/pipeline.h"
#include "herald/synth.h"
#include "herald/workflow.h"
#include "spdlog/sinks/stdout_color_sinks.h"
#include "spdlog/spdlog.h"

namespace herald {
namespace {

int ExitCode(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig:
      return 2;
    case ErrorKind::kMissingPrerequisite:
      return 3;
    case ErrorKind::kDataValidation:
      return 4;
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kIo:
      return 1;
  }
  return 1;
}

// Writes to `path`, or stdout when it is empty.
void Emit(const std::string& path, std::string_view text) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
  } else {
    WriteFileAtomic(path, text);
  }
}

std::string JoinGroups(const std::set<int>& groups) {
  std::string out;
  for (int g : groups) {
    if (!out.empty()) out += ',';
    out += std::to_string(g);
  }
  return out;
}

RuleSet LoadRules(const std::string& path) {
  return path.empty() ? DefaultRuleSet() : LoadRuleSet(path);
}

WeakLabelMap LoadWeak(const std::string& path) {
  std::istringstream in(ReadFile(path));
  return ParseLabels(in);
}

struct SynthOptions {
  SynthConfig config;
  std::string out;
  std::string role = "train";
  std::string mode = "text";
};

struct LabelOptions {
  std::string corpus;
  std::string role = "train";
  std::string rules;
  std::vector<int> groups = {1, 2, 3, 4};
  bool regex_only = false;
  bool nlu_only = false;
  std::string tagger_url;
  bool planted_noise = false;
  std::string out;
};

struct EmbedOptions {
  std::string corpus;
  std::string role = "train";
  bool builtin = false;
  std::string load;
  EmbedderConfig embedder;
  std::string out;
};

struct ValueOptions {
  std::string train;
  std::string labels;
  std::string dev;
  std::string dev_corpus;
  WorkflowConfig workflow;
  bool no_upsample_dev = false;
  std::string out;
};

struct DenoiseOptions {
  std::string scores;
  std::string weak;
  std::string policy = "keep_higher";
  std::string out;
};

struct TrainOptions {
  std::string clean;
  std::string weak;
  std::string gold;
  std::string emb;
  TrainConfig train;
  bool no_upsample = false;
  std::string out;
};

struct PredictOptions {
  std::string model;
  std::string emb;
  std::string out;
};

struct EvalOptions {
  std::string model;
  std::string emb;
  std::string corpus;
  double beta = 2.0;
  std::string out;
};

struct CurveOptions {
  std::string scores;
  std::string weak;
  std::string emb;
  std::string eval_emb;
  std::string eval_corpus;
  std::vector<std::string> strategies = {"low_first", "high_first", "random"};
  CurveConfig curve;
  bool accuracy = false;
  std::string out_dir = ".";
};

struct AblateOptions {
  std::string corpus;
  std::string rules;
  double beta = 2.0;
  std::string out;
};

struct RunOptions {
  std::string stage;
  std::string config;
  std::string baseline;
};

int DoSynth(SynthOptions& o) {
  o.config.role = ParseCorpusRole(o.role);
  o.config.source_mode = ParseSourceMode(o.mode);
  Emit(o.out, SerializeCorpus(SynthCorpus(o.config)));
  return 0;
}

int DoLabel(const LabelOptions& o) {
  Corpus corpus = ReadCorpusFile(o.corpus, ParseCorpusRole(o.role));
  RuleSet rules = LoadRules(o.rules);
  rules.enabled_groups = std::set<int>(o.groups.begin(), o.groups.end());
  for (int g : rules.enabled_groups) {
    if (g < 1 || g > kNumGroups) throw ConfigError("--groups entries must be 1-4");
  }
  if (o.regex_only && o.nlu_only) {
    throw ConfigError("--regex-only and --nlu-only are exclusive");
  }
  rules.use_dialog_acts = !o.regex_only;
  rules.use_regex = !o.nlu_only;
  if (!o.tagger_url.empty() && rules.use_dialog_acts) {
    AttachDialogActs(corpus, {o.tagger_url});
  }
  const MatchMap matches = LabelCorpus(corpus, rules);
  WeakLabelMap weak = ToWeakLabels(matches);
  if (o.planted_noise) weak = ApplyPlantedNoise(weak, corpus);
  std::ostringstream out;
  SerializeLabels(weak, corpus, out);
  Emit(o.out, out.str());

  const CoverageReport coverage = ComputeCoverage(matches, corpus);
  spdlog::info("labeled {} turns with groups {}", coverage.turn_count,
               JoinGroups(rules.enabled_groups));
  for (int g = 0; g < kNumGroups; ++g) {
    spdlog::info("group {}: {} turns ({:.2f}%)", g + 1, coverage.matched[g],
                 coverage.percent[g]);
  }
  return 0;
}

int DoEmbed(const EmbedOptions& o) {
  if (o.builtin == !o.load.empty()) {
    throw ConfigError("pass exactly one of --builtin and --load");
  }
  const Corpus corpus = ReadCorpusFile(o.corpus, ParseCorpusRole(o.role));
  EmbeddingMatrix matrix;
  if (o.builtin) {
    matrix = EmbedCorpusBuiltin(corpus, o.embedder);
  } else {
    matrix = LoadEmbeddings(o.load);
    ValidateKeys(matrix, corpus, /*require_all=*/true);
  }
  SaveEmbeddings(matrix, o.out);
  spdlog::info("wrote {} x {} embeddings to {}", matrix.rows(), matrix.dim(), o.out);
  return 0;
}

int DoValue(ValueOptions& o) {
  if (o.no_upsample_dev) o.workflow.denoise.upsample_dev = false;
  const EmbeddingMatrix train = LoadEmbeddings(o.train);
  const WeakLabelMap weak = LoadWeak(o.labels);
  const LabeledFeatures dev = GoldFeatures(
      ReadCorpusFile(o.dev_corpus, CorpusRole::kDev), LoadEmbeddings(o.dev));
  const DuplicatedDataset duplicated = DuplicateAllLabels(weak);
  const ValuationSpace space = BuildValuationSpace(WeakFeatures(weak, train), o.workflow);
  const ShapleyScores scores = ValueEntries(DuplicatedFeatures(duplicated, train), dev,
                                            space, o.workflow);
  std::vector<ScoreRecord> records;
  for (std::size_t i = 0; i < duplicated.size(); ++i) {
    records.push_back({duplicated[i].key, duplicated[i].label, scores.values[i]});
  }
  std::ostringstream out;
  WriteScores(records, out);
  Emit(o.out, out.str());
  return 0;
}

int DoDenoise(const DenoiseOptions& o) {
  DenoiseConfig config;
  config.policy = ParseConflictPolicy(o.policy);
  const WeakLabelMap weak = LoadWeak(o.weak);
  std::istringstream scores_in(ReadFile(o.scores));
  const DuplicatedDataset duplicated = DuplicateAllLabels(weak);
  const std::vector<double> scores = AlignScores(duplicated, ParseScores(scores_in));
  const CleanDataset clean = Denoise(duplicated, scores, config);
  std::size_t flipped = 0;
  for (const CleanEntry& entry : clean) flipped += entry.flipped;
  std::ostringstream out;
  WriteClean(clean, out);
  Emit(o.out, out.str());
  spdlog::info("kept {} of {} entries, {} flipped", clean.size(), duplicated.size(),
               flipped);
  return 0;
}

int DoTrain(const TrainOptions& o) {
  const int sources = !o.clean.empty() + !o.weak.empty() + !o.gold.empty();
  if (sources != 1) throw ConfigError("pass exactly one of --clean, --weak and --gold");
  const EmbeddingMatrix embeddings = LoadEmbeddings(o.emb);
  LabeledFeatures training;
  std::string source;
  if (!o.clean.empty()) {
    std::istringstream in(ReadFile(o.clean));
    training = CleanFeatures(ParseClean(in), embeddings);
    source = "clean";
  } else if (!o.weak.empty()) {
    training = WeakFeatures(LoadWeak(o.weak), embeddings);
    source = "weak";
  } else {
    training = GoldFeatures(ReadCorpusFile(o.gold, CorpusRole::kDev), embeddings);
    source = "gold";
  }
  WorkflowConfig workflow;
  workflow.train = o.train;
  workflow.denoise.upsample_clean = !o.no_upsample;
  const FittedDetector detector = FitDetector(training, workflow);
  ModelFile model;
  model.head = detector.head;
  model.metadata = {{"detector", "linear"},
                    {"source", source},
                    {"training_rows", training.labels.size()},
                    {"upsampled", !o.no_upsample},
                    {"learning_rate", o.train.learning_rate},
                    {"epochs", o.train.epochs},
                    {"l2_penalty", o.train.l2_penalty},
                    {"seed", o.train.seed},
                    {"tool_version", HERALD_VERSION}};
  SaveModel(model, o.out);
  return 0;
}

int DoPredict(const PredictOptions& o) {
  const ModelFile model = LoadModel(o.model);
  const EmbeddingMatrix embeddings = LoadEmbeddings(o.emb);
  std::string text;
  for (std::size_t i = 0; i < embeddings.rows(); ++i) {
    const Posterior posterior = PredictLinear(model.head, embeddings.Row(i));
    OrderedJson line = {{"key", embeddings.keys()[i].ToString()},
                        {"label", posterior[1] > 0.5 ? 1 : 0},
                        {"p_disengaged", posterior[1]}};
    text += line.dump() + "\n";
  }
  Emit(o.out, text);
  return 0;
}

int DoEval(const EvalOptions& o) {
  const ModelFile model = LoadModel(o.model);
  const LabeledFeatures test =
      GoldFeatures(ReadCorpusFile(o.corpus, CorpusRole::kTest), LoadEmbeddings(o.emb));
  std::vector<Label> predictions;
  for (std::size_t i = 0; i < test.features.rows(); ++i) {
    predictions.push_back(DecideLinear(model.head, test.features.Row(i)));
  }
  Emit(o.out, Evaluate(predictions, test.labels, o.beta).ToJson().dump(2) + "\n");
  return 0;
}

int DoCurve(const CurveOptions& o) {
  const WeakLabelMap weak = LoadWeak(o.weak);
  const EmbeddingMatrix train = LoadEmbeddings(o.emb);
  const LabeledFeatures eval = GoldFeatures(
      ReadCorpusFile(o.eval_corpus, CorpusRole::kTest), LoadEmbeddings(o.eval_emb));
  std::istringstream scores_in(ReadFile(o.scores));
  const DuplicatedDataset duplicated = DuplicateAllLabels(weak);
  const std::vector<double> aligned = AlignScores(duplicated, ParseScores(scores_in));
  const LabeledFeatures points = WeakFeatures(weak, train);
  const std::vector<double> scores = WeakCopyScores(weak, duplicated, aligned);
  for (const std::string& name : o.strategies) {
    const RemovalStrategy strategy = ParseRemovalStrategy(name);
    const RemovalCurve curve = ComputeRemovalCurve(
        points.features, points.labels, scores, eval.features, eval.labels,
        strategy, o.curve);
    const std::filesystem::path path =
        std::filesystem::path(o.out_dir) /
        ("curve." + std::string(ToString(strategy)) + ".csv");
    WriteFileAtomic(path, CurveCsv(curve, o.accuracy));
    spdlog::info("wrote {}", path.string());
  }
  return 0;
}

int DoAblate(const AblateOptions& o) {
  const Corpus corpus = ReadCorpusFile(o.corpus, CorpusRole::kTest);
  const std::vector<AblationToggle> toggles = StandardAblations();
  const auto rows = RunAblation(corpus, LoadRules(o.rules), toggles, o.beta);
  Emit(o.out, AblationJson(rows).dump(2) + "\n");
  return 0;
}

int DoRun(const RunOptions& o) {
  const PipelineConfig config = LoadPipelineConfig(o.config);
  const Variant variant = o.baseline.empty() ? Variant::kHerald : ParseVariant(o.baseline);
  if (variant == Variant::kHerald && !o.baseline.empty()) {
    throw ConfigError("--baseline must be weak or dev-only");
  }
  if (o.stage == "all") {
    const MetricReport report = RunAll(config, variant);
    std::cout << report.ToJson().dump(2) << "\n";
    return 0;
  }
  const StageResult result = RunStage(ParseStage(o.stage), config, variant);
  if (result.report) std::cout << result.report->ToJson().dump(2) << "\n";
  return 0;
}

}  // namespace
}  // namespace herald

int main(int argc, char** argv) {
  using namespace herald;
  auto logger = spdlog::stderr_color_mt("herald");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("%^%l%$: %v");

  CLI::App app{"Heuristic labeling and Shapley denoising of user disengagement"};
  app.set_version_flag("--version", HERALD_VERSION);
  app.require_subcommand(1);
  app.fallthrough();
  bool quiet = false;
  bool verbose = false;
  app.add_flag("-q,--quiet", quiet, "Only log warnings and errors");
  app.add_flag("-v,--verbose", verbose, "Log debug output");
  int status = 0;

  SynthOptions synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic gold-labeled corpus");
  synth_cmd->add_option("--out", synth.out, "Output corpus (default stdout)");
  synth_cmd->add_option("--dialogs", synth.config.n_dialogs, "Number of dialogs");
  synth_cmd->add_option("--turns", synth.config.turns_per_dialog, "Turns per dialog");
  synth_cmd->add_option("--disengaged-rate", synth.config.disengaged_rate);
  synth_cmd->add_option("--noise-rate", synth.config.noise_rate);
  synth_cmd->add_option("--paraphrase-rate", synth.config.paraphrase_rate);
  synth_cmd->add_option("--hard-negative-rate", synth.config.hard_negative_rate);
  synth_cmd->add_option("--seed", synth.config.seed);
  synth_cmd->add_option("--prefix", synth.config.id_prefix, "Dialog id prefix");
  synth_cmd->add_option("--role", synth.role)->check(CLI::IsMember({"train", "dev", "test"}));
  synth_cmd->add_option("--mode", synth.mode)->check(CLI::IsMember({"text", "asr"}));
  synth_cmd->callback([&] { status = DoSynth(synth); });

  LabelOptions label;
  auto* label_cmd = app.add_subcommand("label", "Weak-label a corpus with the heuristic rules");
  label_cmd->add_option("--corpus", label.corpus)->required()->check(CLI::ExistingFile);
  label_cmd->add_option("--role", label.role)->check(CLI::IsMember({"train", "dev", "test"}));
  label_cmd->add_option("--rules", label.rules, "Rule file (default: built-in)")
      ->check(CLI::ExistingFile);
  label_cmd->add_option("--groups", label.groups, "Enabled groups, e.g. 1,2,4")
      ->delimiter(',');
  label_cmd->add_flag("--regex-only", label.regex_only, "Ignore dialog-act tags");
  label_cmd->add_flag("--nlu-only", label.nlu_only, "Use dialog-act tags only");
  label_cmd->add_option("--tagger-url", label.tagger_url, "Dialog-act tagger endpoint");
  label_cmd->add_flag("--planted-noise", label.planted_noise,
                      "Apply the synthetic noisy_label channel");
  label_cmd->add_option("--out", label.out, "Output labels (default stdout)");
  label_cmd->callback([&] { status = DoLabel(label); });

  EmbedOptions embed;
  auto* embed_cmd = app.add_subcommand("embed", "Write an HEMB embedding file for a corpus");
  embed_cmd->add_option("--corpus", embed.corpus)->required()->check(CLI::ExistingFile);
  embed_cmd->add_option("--role", embed.role)->check(CLI::IsMember({"train", "dev", "test"}));
  embed_cmd->add_flag("--builtin", embed.builtin, "Use the built-in lexical embedder");
  embed_cmd->add_option("--load", embed.load, "Validate and copy an external HEMB file")
      ->check(CLI::ExistingFile);
  embed_cmd->add_option("--dim", embed.embedder.dim)->check(CLI::Range(2, 1 << 20));
  embed_cmd->add_option("--context-depth", embed.embedder.context_depth)
      ->check(CLI::NonNegativeNumber);
  embed_cmd->add_option("--out", embed.out)->required();
  embed_cmd->callback([&] { status = DoEmbed(embed); });

  ValueOptions value;
  auto* value_cmd = app.add_subcommand("value", "Value every duplicated entry against a dev set");
  value_cmd->add_option("--train", value.train, "Training HEMB")->required()->check(CLI::ExistingFile);
  value_cmd->add_option("--labels", value.labels, "Weak labels")->required()->check(CLI::ExistingFile);
  value_cmd->add_option("--dev", value.dev, "Dev HEMB")->required()->check(CLI::ExistingFile);
  value_cmd->add_option("--dev-corpus", value.dev_corpus, "Gold-labeled dev corpus")
      ->required()
      ->check(CLI::ExistingFile);
  value_cmd->add_option("--k", value.workflow.valuation.k)->check(CLI::PositiveNumber);
  value_cmd->add_option("--threads", value.workflow.valuation.threads)->check(CLI::PositiveNumber);
  value_cmd->add_option("--adapt-scale", value.workflow.adapt_scale,
                        "Weak-label posterior weight; 0 values raw features")
      ->check(CLI::NonNegativeNumber);
  value_cmd->add_option("--learning-rate", value.workflow.train.learning_rate)
      ->check(CLI::PositiveNumber);
  value_cmd->add_option("--epochs", value.workflow.train.epochs)->check(CLI::PositiveNumber);
  value_cmd->add_flag("--no-upsample-dev", value.no_upsample_dev);
  value_cmd->add_option("--out", value.out, "Scores JSONL (default stdout)");
  value_cmd->callback([&] { status = DoValue(value); });

  DenoiseOptions denoise;
  auto* denoise_cmd = app.add_subcommand("denoise", "Drop negative copies and resolve conflicts");
  denoise_cmd->add_option("--scores", denoise.scores)->required()->check(CLI::ExistingFile);
  denoise_cmd->add_option("--weak", denoise.weak)->required()->check(CLI::ExistingFile);
  denoise_cmd->add_option("--policy", denoise.policy)
      ->check(CLI::IsMember({"keep_higher", "keep_original", "keep_both"}));
  denoise_cmd->add_option("--out", denoise.out, "Clean JSONL (default stdout)");
  denoise_cmd->callback([&] { status = DoDenoise(denoise); });

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "Train the linear detector head");
  train_cmd->add_option("--clean", train.clean)->check(CLI::ExistingFile);
  train_cmd->add_option("--weak", train.weak)->check(CLI::ExistingFile);
  train_cmd->add_option("--gold", train.gold, "Gold-labeled corpus")->check(CLI::ExistingFile);
  train_cmd->add_option("--emb", train.emb)->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--learning-rate", train.train.learning_rate)->check(CLI::PositiveNumber);
  train_cmd->add_option("--epochs", train.train.epochs)->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--l2", train.train.l2_penalty)->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--seed", train.train.seed);
  train_cmd->add_flag("--no-upsample", train.no_upsample);
  train_cmd->add_option("--out", train.out)->required();
  train_cmd->callback([&] { status = DoTrain(train); });

  PredictOptions predict;
  auto* predict_cmd = app.add_subcommand("predict", "Score every row of an HEMB file");
  predict_cmd->add_option("--model", predict.model)->required()->check(CLI::ExistingFile);
  predict_cmd->add_option("--emb", predict.emb)->required()->check(CLI::ExistingFile);
  predict_cmd->add_option("--out", predict.out, "Predictions JSONL (default stdout)");
  predict_cmd->callback([&] { status = DoPredict(predict); });

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a model on a gold-labeled corpus");
  eval_cmd->add_option("--model", eval.model)->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--emb", eval.emb)->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--corpus", eval.corpus)->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--beta", eval.beta)->check(CLI::PositiveNumber);
  eval_cmd->add_option("--out", eval.out, "Report JSON (default stdout)");
  eval_cmd->callback([&] { status = DoEval(eval); });

  CurveOptions curve;
  auto* curve_cmd = app.add_subcommand("curve", "Removal curves over the weak-labeled set");
  curve_cmd->add_option("--scores", curve.scores)->required()->check(CLI::ExistingFile);
  curve_cmd->add_option("--weak", curve.weak)->required()->check(CLI::ExistingFile);
  curve_cmd->add_option("--emb", curve.emb, "Training HEMB")->required()->check(CLI::ExistingFile);
  curve_cmd->add_option("--eval-emb", curve.eval_emb)->required()->check(CLI::ExistingFile);
  curve_cmd->add_option("--eval-corpus", curve.eval_corpus)->required()->check(CLI::ExistingFile);
  curve_cmd->add_option("--strategy", curve.strategies)
      ->check(CLI::IsMember({"low_first", "high_first", "retain_hurtful", "random"}));
  curve_cmd->add_option("--k", curve.curve.k)->check(CLI::PositiveNumber);
  curve_cmd->add_option("--step", curve.curve.step)->check(CLI::PositiveNumber);
  curve_cmd->add_option("--max-removed", curve.curve.max_removed);
  curve_cmd->add_option("--seed", curve.curve.seed);
  curve_cmd->add_flag("--refit-head", curve.curve.refit_head);
  curve_cmd->add_flag("--accuracy", curve.accuracy, "Emit raw accuracy instead of bACC");
  curve_cmd->add_option("--out-dir", curve.out_dir);
  curve_cmd->callback([&] { status = DoCurve(curve); });

  AblateOptions ablate;
  auto* ablate_cmd = app.add_subcommand("ablate", "Heuristic ablations on a gold-labeled corpus");
  ablate_cmd->add_option("--corpus", ablate.corpus)->required()->check(CLI::ExistingFile);
  ablate_cmd->add_option("--rules", ablate.rules)->check(CLI::ExistingFile);
  ablate_cmd->add_option("--beta", ablate.beta)->check(CLI::PositiveNumber);
  ablate_cmd->add_option("--out", ablate.out, "Report JSON (default stdout)");
  ablate_cmd->callback([&] { status = DoAblate(ablate); });

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run a configured pipeline stage, or all");
  run_cmd->add_option("stage", run.stage, "label|embed|value|denoise|train|eval|curve|ablate|synth|all")
      ->required();
  run_cmd->add_option("--config", run.config, "Pipeline TOML")->required();
  run_cmd->add_option("--baseline", run.baseline, "weak or dev-only")
      ->check(CLI::IsMember({"weak", "dev-only"}));
  run_cmd->callback([&] { status = DoRun(run); });

  app.parse_complete_callback([&] {
    if (quiet) spdlog::set_level(spdlog::level::warn);
    if (verbose) spdlog::set_level(spdlog::level::debug);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return ExitCode(e.kind());
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return status;
}

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


#include "herald/pipeline.h"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <sstream>
#include <type_traits>

#include "herald/denoiser.h"
#include "herald/dialog_act_client.h"
#include "herald/error.h"
#include "herald/file_util.h"
#include "herald/heuristics.h"
#include "herald/model.h"
#include "spdlog/spdlog.h"
#include "toml.hpp"

namespace herald {
namespace fs = std::filesystem;

namespace {

// Every accepted config key; the same table drives environment overrides
// and the unknown-key check. An empty section means top level.
struct ConfigKey {
  std::string_view section;
  std::string_view key;
};

constexpr ConfigKey kSchema[] = {
    {"", "seed"},
    {"paths", "train"},
    {"paths", "dev"},
    {"paths", "test"},
    {"paths", "rules"},
    {"paths", "out_dir"},
    {"paths", "train_embeddings"},
    {"paths", "dev_embeddings"},
    {"paths", "test_embeddings"},
    {"label", "groups"},
    {"label", "use_regex"},
    {"label", "use_dialog_acts"},
    {"label", "tagger_url"},
    {"label", "tagger_timeout"},
    {"label", "planted_noise"},
    {"embed", "source"},
    {"embed", "dim"},
    {"embed", "context_depth"},
    {"embed", "user_weight"},
    {"embed", "context_weight"},
    {"embed", "l2_normalize"},
    {"value", "k"},
    {"value", "threads"},
    {"value", "adapt_scale"},
    {"denoise", "policy"},
    {"denoise", "upsample_dev"},
    {"denoise", "upsample_clean"},
    {"denoise", "upsample_ratio"},
    {"train", "learning_rate"},
    {"train", "epochs"},
    {"train", "l2_penalty"},
    {"train", "detector"},
    {"eval", "beta"},
    {"curve", "strategies"},
    {"curve", "set"},
    {"curve", "step"},
    {"curve", "max_removed"},
    {"curve", "refit_head"},
    {"synth", "train_dialogs"},
    {"synth", "dev_dialogs"},
    {"synth", "test_dialogs"},
    {"synth", "turns_per_dialog"},
    {"synth", "disengaged_rate"},
    {"synth", "noise_rate"},
    {"synth", "paraphrase_rate"},
    {"synth", "hard_negative_rate"},
    {"synth", "group_weights"},
    {"synth", "source_mode"},
};

bool KnownSection(std::string_view name) {
  return std::any_of(std::begin(kSchema), std::end(kSchema),
                     [&](const ConfigKey& k) { return k.section == name; });
}

bool KnownKey(std::string_view section, std::string_view key) {
  return std::any_of(std::begin(kSchema), std::end(kSchema), [&](const ConfigKey& k) {
    return k.section == section && k.key == key;
  });
}

std::string EnvName(const ConfigKey& k) {
  std::string name = "HERALD_";
  if (!k.section.empty()) {
    name += k.section;
    name += '_';
  }
  name += k.key;
  for (char& c : name) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return name;
}

OrderedJson EnvValue(const std::string& text) {
  try {
    OrderedJson value = OrderedJson::parse(text);
    if (!value.is_object()) return value;
  } catch (const OrderedJson::parse_error&) {
  }
  return text;
}

std::string Where(std::string_view section, std::string_view key) {
  return section.empty() ? std::string(key) : std::string(section) + "." + std::string(key);
}

// Typed access to one section of the config document.
class Section {
 public:
  Section(const OrderedJson& root, std::string_view name) : name_(name) {
    if (name.empty()) {
      node_ = &root;
    } else if (root.contains(std::string(name))) {
      node_ = &root.at(std::string(name));
    }
  }

  template <typename T>
  void Get(std::string_view key, T& out) const {
    const OrderedJson* value = Find(key);
    if (value == nullptr) return;
    bool ok = true;
    if constexpr (std::is_same_v<T, bool>) {
      ok = value->is_boolean();
    } else if constexpr (std::is_integral_v<T>) {
      ok = value->is_number_integer();
    } else if constexpr (std::is_floating_point_v<T>) {
      ok = value->is_number();
    } else if constexpr (std::is_same_v<T, std::string>) {
      ok = value->is_string();
    }
    if (!ok) throw ConfigError(Where(name_, key) + " has the wrong type");
    try {
      out = value->get<T>();
    } catch (const OrderedJson::exception&) {
      throw ConfigError(Where(name_, key) + " has the wrong type");
    }
  }

  void GetPath(std::string_view key, fs::path& out, const fs::path& base) const {
    std::string text;
    Get(key, text);
    if (text.empty()) return;
    out = (fs::path(text).is_absolute() ? fs::path(text) : base / text).lexically_normal();
  }

  const OrderedJson* Find(std::string_view key) const {
    if (node_ == nullptr || !node_->contains(std::string(key))) return nullptr;
    return &node_->at(std::string(key));
  }

 private:
  std::string name_;
  const OrderedJson* node_ = nullptr;
};

template <typename T>
void Require(bool ok, std::string_view section, std::string_view key, const T& what) {
  if (!ok) throw ConfigError(Where(section, key) + " " + what);
}

void CheckRate(double value, std::string_view section, std::string_view key) {
  Require(value >= 0.0 && value <= 1.0, section, key, "must be in [0, 1]");
}

OrderedJson TomlToJson(std::string_view text) {
  try {
    const toml::table table = toml::parse(text);
    std::ostringstream out;
    out << toml::json_formatter{table};
    return OrderedJson::parse(out.str());
  } catch (const toml::parse_error& e) {
    std::ostringstream message;
    message << "config: " << e.description() << " at line "
            << e.source().begin.line;
    throw ConfigError(message.str());
  }
}

std::string Timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

// Reads inputs and writes outputs of one stage, then the manifest.
class StageRun {
 public:
  StageRun(std::string name, const PipelineConfig& config)
      : name_(std::move(name)), config_(config), artifacts_(ArtifactsOf(config)) {}

  // Throws MissingPrerequisite when `path` does not exist.
  std::string Read(const fs::path& path, std::string_view what,
                   std::string_view producer) {
    if (path.empty() || !fs::exists(path)) {
      std::string message = name_ + " requires " + std::string(what) + "; ";
      message += producer.empty() ? "set it in the config"
                                  : "run `" + std::string(producer) + "` first";
      if (!path.empty()) message += " (missing " + path.string() + ")";
      throw MissingPrerequisite(message);
    }
    std::string bytes = ReadFile(path);
    inputs_.push_back({{"path", path.string()}, {"sha256", Sha256Hex(bytes)}});
    return bytes;
  }

  void Write(const fs::path& path, std::string_view bytes) {
    WriteFileAtomic(path, bytes);
    outputs_.push_back({{"path", path.string()}, {"sha256", Sha256Hex(bytes)}});
    written_.push_back(path);
    spdlog::info("{}: wrote {}", name_, path.string());
  }

  OrderedJson& summary() { return summary_; }

  StageResult Finish() {
    OrderedJson manifest;
    manifest["stage"] = name_;
    manifest["tool_version"] = HERALD_VERSION;
    manifest["created"] = Timestamp();
    manifest["inputs"] = inputs_;
    manifest["outputs"] = outputs_;
    if (!summary_.empty()) manifest["summary"] = summary_;
    manifest["config"] = config_.ToJson();
    WriteFileAtomic(artifacts_.Manifest(name_), manifest.dump(2) + "\n");
    return {written_, std::nullopt};
  }

 private:
  std::string name_;
  const PipelineConfig& config_;
  ArtifactPaths artifacts_;
  OrderedJson inputs_ = OrderedJson::array();
  OrderedJson outputs_ = OrderedJson::array();
  OrderedJson summary_ = OrderedJson::object();
  std::vector<fs::path> written_;
};

Corpus ReadCorpus(StageRun& run, const fs::path& path, CorpusRole role) {
  std::istringstream in(
      run.Read(path, "the " + std::string(ToString(role)) + " corpus", ""));
  return ParseCorpus(in, role);
}

EmbeddingMatrix ReadEmbeddings(StageRun& run, const fs::path& path) {
  return DecodeHemb(run.Read(path, "embeddings", "embed"));
}

WeakLabelMap ReadWeakLabels(StageRun& run, const ArtifactPaths& artifacts) {
  std::istringstream in(run.Read(artifacts.weak_labels, "weak labels", "label"));
  return ParseLabels(in);
}

RuleSet ReadRules(StageRun& run, const PipelineConfig& config) {
  RuleSet rules;
  if (config.paths.rules.empty()) {
    rules = DefaultRuleSet();
  } else {
    const std::string text = run.Read(config.paths.rules, "the rule file", "");
    rules = ParseRuleSet(text, config.paths.rules.extension() == ".json"
                                   ? RuleFormat::kJson
                                   : RuleFormat::kToml);
  }
  return rules;
}

template <typename Serialize>
std::string ToText(Serialize serialize) {
  std::ostringstream out;
  serialize(out);
  return out.str();
}

StageResult RunLabel(const PipelineConfig& config) {
  StageRun run("label", config);
  const ArtifactPaths artifacts = ArtifactsOf(config);
  Corpus corpus = ReadCorpus(run, config.paths.train_corpus, CorpusRole::kTrain);
  RuleSet rules = ReadRules(run, config);
  rules.enabled_groups = config.label.groups;
  rules.use_regex = config.label.use_regex;
  rules.use_dialog_acts = config.label.use_dialog_acts;
  if (!config.label.tagger_url.empty() && config.label.use_dialog_acts) {
    AttachDialogActs(corpus, {config.label.tagger_url, config.label.tagger_timeout});
  }
  const MatchMap matches = LabelCorpus(corpus, rules);
  WeakLabelMap weak = ToWeakLabels(matches);
  if (config.label.planted_noise) weak = ApplyPlantedNoise(weak, corpus);

  const CoverageReport coverage = ComputeCoverage(matches, corpus);
  std::size_t disengaged = 0;
  for (const auto& [key, record] : weak) disengaged += record.label == Label::kDisengaged;
  run.summary()["turns"] = weak.size();
  run.summary()["disengaged"] = disengaged;
  run.summary()["group_percent"] = coverage.percent;

  run.Write(artifacts.weak_labels,
            ToText([&](std::ostream& out) { SerializeLabels(weak, corpus, out); }));
  return run.Finish();
}

StageResult RunEmbed(const PipelineConfig& config) {
  StageRun run("embed", config);
  const ArtifactPaths artifacts = ArtifactsOf(config);
  struct Split {
    CorpusRole role;
    fs::path corpus;
    fs::path external;
    fs::path out;
  };
  const Split splits[] = {
      {CorpusRole::kTrain, config.paths.train_corpus, config.paths.train_embeddings,
       artifacts.train_embeddings},
      {CorpusRole::kDev, config.paths.dev_corpus, config.paths.dev_embeddings,
       artifacts.dev_embeddings},
      {CorpusRole::kTest, config.paths.test_corpus, config.paths.test_embeddings,
       artifacts.test_embeddings},
  };
  for (const Split& split : splits) {
    const Corpus corpus = ReadCorpus(run, split.corpus, split.role);
    EmbeddingMatrix matrix;
    if (config.embed.source == EmbedSource::kBuiltin) {
      matrix = EmbedCorpusBuiltin(corpus, config.embed.embedder);
    } else {
      matrix = DecodeHemb(run.Read(
          split.external,
          "external " + std::string(ToString(split.role)) + " embeddings", ""));
      ValidateKeys(matrix, corpus, /*require_all=*/true);
    }
    run.Write(split.out, EncodeHemb(matrix));
  }
  return run.Finish();
}

StageResult RunValue(const PipelineConfig& config) {
  StageRun run("value", config);
  const ArtifactPaths artifacts = ArtifactsOf(config);
  const EmbeddingMatrix train = ReadEmbeddings(run, artifacts.train_embeddings);
  const EmbeddingMatrix dev_embeddings = ReadEmbeddings(run, artifacts.dev_embeddings);
  const WeakLabelMap weak = ReadWeakLabels(run, artifacts);
  const Corpus dev_corpus = ReadCorpus(run, config.paths.dev_corpus, CorpusRole::kDev);

  const DuplicatedDataset duplicated = DuplicateAllLabels(weak);
  const WorkflowInputs inputs{weak, train, GoldFeatures(dev_corpus, dev_embeddings), {}};
  const ShapleyScores scores = ValueDuplicated(inputs, duplicated, config.workflow);

  std::vector<ScoreRecord> records;
  records.reserve(duplicated.size());
  std::size_t negative = 0;
  for (std::size_t i = 0; i < duplicated.size(); ++i) {
    records.push_back({duplicated[i].key, duplicated[i].label, scores.values[i]});
    negative += scores.values[i] < 0.0;
  }
  run.summary()["entries"] = records.size();
  run.summary()["negative"] = negative;
  run.summary()["dev_points"] = scores.dev_count;
  run.Write(artifacts.scores,
            ToText([&](std::ostream& out) { WriteScores(records, out); }));
  return run.Finish();
}

StageResult RunDenoise(const PipelineConfig& config) {
  StageRun run("denoise", config);
  const ArtifactPaths artifacts = ArtifactsOf(config);
  std::istringstream scores_in(run.Read(artifacts.scores, "Shapley scores", "value"));
  const std::vector<ScoreRecord> records = ParseScores(scores_in);
  const WeakLabelMap weak = ReadWeakLabels(run, artifacts);

  const DuplicatedDataset duplicated = DuplicateAllLabels(weak);
  const std::vector<double> scores = AlignScores(duplicated, records);
  const CleanDataset clean = Denoise(duplicated, scores, config.workflow.denoise);

  std::set<TurnKey> kept;
  std::size_t flipped = 0;
  for (const CleanEntry& entry : clean) {
    flipped += entry.flipped;
    kept.insert(entry.key);
  }
  run.summary()["entries"] = clean.size();
  run.summary()["flipped"] = flipped;
  run.summary()["dropped_turns"] = weak.size() - kept.size();
  run.Write(artifacts.clean, ToText([&](std::ostream& out) { WriteClean(clean, out); }));
  return run.Finish();
}

LabeledFeatures ReadTrainingSet(StageRun& run, const PipelineConfig& config,
                                Variant variant) {
  const ArtifactPaths artifacts = ArtifactsOf(config);
  switch (variant) {
    case Variant::kHerald: {
      const EmbeddingMatrix train = ReadEmbeddings(run, artifacts.train_embeddings);
      std::istringstream in(run.Read(artifacts.clean, "the clean dataset", "denoise"));
      return CleanFeatures(ParseClean(in), train);
    }
    case Variant::kWeak: {
      const EmbeddingMatrix train = ReadEmbeddings(run, artifacts.train_embeddings);
      return WeakFeatures(ReadWeakLabels(run, artifacts), train);
    }
    case Variant::kDevOnly: {
      const EmbeddingMatrix dev = ReadEmbeddings(run, artifacts.dev_embeddings);
      return GoldFeatures(ReadCorpus(run, config.paths.dev_corpus, CorpusRole::kDev),
                          dev);
    }
  }
  throw InvalidArgument("unknown variant");
}

std::string StageName(std::string_view stage, Variant variant) {
  std::string name(stage);
  if (variant != Variant::kHerald) {
    name += '.';
    name += ToString(variant);
  }
  return name;
}

StageResult RunTrain(const PipelineConfig& config, Variant variant) {
  StageRun run(StageName("train", variant), config);
  const LabeledFeatures training = ReadTrainingSet(run, config, variant);
  const FittedDetector detector = FitDetector(training, config.workflow);

  ModelFile model;
  model.head = config.workflow.detector == Detector::kLinear
                   ? detector.head
                   : LinearHead::Zero(training.features.dim());
  const TrainConfig& train = config.workflow.train;
  model.metadata = {
      {"detector", ToString(config.workflow.detector)},
      {"variant", ToString(variant)},
      {"training_rows", training.labels.size()},
      {"upsampled", config.workflow.denoise.upsample_clean},
      {"k", config.workflow.valuation.k},
      {"learning_rate", train.learning_rate},
      {"epochs", train.epochs},
      {"l2_penalty", train.l2_penalty},
      {"seed", train.seed},
      {"tool_version", HERALD_VERSION},
  };
  run.summary()["training_rows"] = training.labels.size();
  run.Write(ArtifactsOf(config).Model(variant), SerializeModel(model));
  return run.Finish();
}

StageResult RunEval(const PipelineConfig& config, Variant variant) {
  StageRun run(StageName("eval", variant), config);
  const ArtifactPaths artifacts = ArtifactsOf(config);
  const ModelFile model =
      ParseModel(run.Read(artifacts.Model(variant), "a trained model", "train"));
  const EmbeddingMatrix test_embeddings = ReadEmbeddings(run, artifacts.test_embeddings);
  const Corpus test_corpus = ReadCorpus(run, config.paths.test_corpus, CorpusRole::kTest);
  const LabeledFeatures test = GoldFeatures(test_corpus, test_embeddings);

  // A KNN detector is its training set; the model file only names it.
  const std::string detector_name = model.metadata.value("detector", "linear");
  FittedDetector detector;
  if (ParseDetector(detector_name) == Detector::kKnn) {
    WorkflowConfig workflow = config.workflow;
    workflow.detector = Detector::kKnn;
    workflow.valuation.k = model.metadata.value("k", workflow.valuation.k);
    detector = FitDetector(ReadTrainingSet(run, config, variant), workflow);
  } else {
    detector.kind = Detector::kLinear;
    detector.head = model.head;
  }
  if (detector.kind == Detector::kLinear && model.head.dim != test.features.dim()) {
    throw DataError("model dim " + std::to_string(model.head.dim) +
                    " does not match test embedding dim " +
                    std::to_string(test.features.dim()));
  }
  const MetricReport report =
      Evaluate(detector.Predict(test.features), test.labels, config.workflow.beta);

  OrderedJson out = report.ToJson();
  out["variant"] = ToString(variant);
  out["detector"] = detector_name;
  out["test_turns"] = test.labels.size();
  run.Write(artifacts.Report(variant), out.dump(2) + "\n");
  StageResult result = run.Finish();
  result.report = report;
  return result;
}

StageResult RunCurve(const PipelineConfig& config) {
  StageRun run("curve", config);
  const ArtifactPaths artifacts = ArtifactsOf(config);
  const EmbeddingMatrix train = ReadEmbeddings(run, artifacts.train_embeddings);
  const EmbeddingMatrix test_embeddings = ReadEmbeddings(run, artifacts.test_embeddings);
  const WeakLabelMap weak = ReadWeakLabels(run, artifacts);
  std::istringstream scores_in(run.Read(artifacts.scores, "Shapley scores", "value"));
  const std::vector<ScoreRecord> records = ParseScores(scores_in);
  const LabeledFeatures test = GoldFeatures(
      ReadCorpus(run, config.paths.test_corpus, CorpusRole::kTest), test_embeddings);

  const DuplicatedDataset duplicated = DuplicateAllLabels(weak);
  const std::vector<double> aligned = AlignScores(duplicated, records);
  LabeledFeatures points;
  std::vector<double> scores;
  if (config.curve.set == CurveSet::kWeak) {
    points = WeakFeatures(weak, train);
    scores = WeakCopyScores(weak, duplicated, aligned);
  } else {
    points = DuplicatedFeatures(duplicated, train);
    scores = aligned;
  }

  CurveConfig curve;
  curve.k = config.workflow.valuation.k;
  curve.step = config.curve.step;
  curve.max_removed = config.curve.max_removed;
  curve.seed = config.seed;
  curve.refit_head = config.curve.refit_head;
  curve.train = config.workflow.train;
  for (RemovalStrategy strategy : config.curve.strategies) {
    const RemovalCurve result = ComputeRemovalCurve(
        points.features, points.labels, scores, test.features, test.labels,
        strategy, curve);
    run.Write(artifacts.Curve(strategy, false), CurveCsv(result, false));
    run.Write(artifacts.Curve(strategy, true), CurveCsv(result, true));
    if (!result.points.empty()) {
      run.summary()[std::string(ToString(strategy))] = {
          {"start", result.points.front().balanced_accuracy},
          {"end", result.points.back().balanced_accuracy}};
    }
  }
  return run.Finish();
}

StageResult RunAblate(const PipelineConfig& config) {
  StageRun run("ablate", config);
  const Corpus corpus = ReadCorpus(run, config.paths.test_corpus, CorpusRole::kTest);
  const RuleSet rules = ReadRules(run, config);
  const std::vector<AblationToggle> toggles = StandardAblations();
  const std::vector<AblationRow> rows =
      RunAblation(corpus, rules, toggles, config.workflow.beta);
  run.Write(ArtifactsOf(config).ablation, AblationJson(rows).dump(2) + "\n");
  return run.Finish();
}

StageResult RunSynth(const PipelineConfig& config) {
  StageRun run("synth", config);
  const SynthSplits splits = SynthExperiment(config.synth, config.seed);
  const std::pair<const Corpus*, fs::path> outputs[] = {
      {&splits.train, config.paths.train_corpus},
      {&splits.dev, config.paths.dev_corpus},
      {&splits.test, config.paths.test_corpus},
  };
  for (const auto& [corpus, path] : outputs) {
    if (path.empty()) throw ConfigError("synth needs paths.train, paths.dev and paths.test");
    run.Write(path, SerializeCorpus(*corpus));
  }
  return run.Finish();
}

}  // namespace

std::optional<std::string> ProcessEnv(const std::string& name) {
  const char* value = std::getenv(name.c_str());
  if (value == nullptr) return std::nullopt;
  return std::string(value);
}

PipelineConfig ParsePipelineConfig(std::string_view toml_text,
                                   const fs::path& base_dir, const EnvLookup& env) {
  OrderedJson root = TomlToJson(toml_text);
  for (const auto& [name, value] : root.items()) {
    if (value.is_object()) {
      if (!KnownSection(name) || name.empty()) {
        throw ConfigError("unknown config section [" + name + "]");
      }
      for (const auto& [key, unused] : value.items()) {
        if (!KnownKey(name, key)) throw ConfigError("unknown config key " + name + "." + key);
      }
    } else if (!KnownKey("", name)) {
      throw ConfigError("unknown config key " + name);
    }
  }
  if (env) {
    for (const ConfigKey& k : kSchema) {
      const auto value = env(EnvName(k));
      if (!value) continue;
      OrderedJson& slot = k.section.empty()
                              ? root[std::string(k.key)]
                              : root[std::string(k.section)][std::string(k.key)];
      slot = EnvValue(*value);
    }
  }

  PipelineConfig config;
  Section top(root, "");
  std::int64_t seed = 0;
  top.Get("seed", seed);
  Require(seed >= 0, "", "seed", "must be non-negative");
  config.seed = static_cast<std::uint64_t>(seed);
  config.workflow.train.seed = config.seed;
  config.synth.base.seed = config.seed;

  const Section paths(root, "paths");
  paths.GetPath("train", config.paths.train_corpus, base_dir);
  paths.GetPath("dev", config.paths.dev_corpus, base_dir);
  paths.GetPath("test", config.paths.test_corpus, base_dir);
  paths.GetPath("rules", config.paths.rules, base_dir);
  config.paths.out_dir = (base_dir / config.paths.out_dir).lexically_normal();
  paths.GetPath("out_dir", config.paths.out_dir, base_dir);
  paths.GetPath("train_embeddings", config.paths.train_embeddings, base_dir);
  paths.GetPath("dev_embeddings", config.paths.dev_embeddings, base_dir);
  paths.GetPath("test_embeddings", config.paths.test_embeddings, base_dir);

  const Section label(root, "label");
  std::vector<int> groups(config.label.groups.begin(), config.label.groups.end());
  label.Get("groups", groups);
  for (int g : groups) {
    Require(g >= 1 && g <= kNumGroups, "label", "groups", "entries must be 1-4");
  }
  config.label.groups = std::set<int>(groups.begin(), groups.end());
  label.Get("use_regex", config.label.use_regex);
  label.Get("use_dialog_acts", config.label.use_dialog_acts);
  label.Get("tagger_url", config.label.tagger_url);
  label.Get("tagger_timeout", config.label.tagger_timeout);
  Require(config.label.tagger_timeout > 0, "label", "tagger_timeout", "must be positive");
  label.Get("planted_noise", config.label.planted_noise);

  const Section embed(root, "embed");
  std::string source = "builtin";
  embed.Get("source", source);
  if (source == "builtin") {
    config.embed.source = EmbedSource::kBuiltin;
  } else if (source == "load") {
    config.embed.source = EmbedSource::kLoad;
  } else {
    throw ConfigError("embed.source must be builtin or load");
  }
  EmbedderConfig& embedder = config.embed.embedder;
  embed.Get("dim", embedder.dim);
  Require(embedder.dim >= 2, "embed", "dim", "must be at least 2");
  embed.Get("context_depth", embedder.context_depth);
  Require(embedder.context_depth >= 0, "embed", "context_depth", "must be non-negative");
  embed.Get("user_weight", embedder.user_weight);
  embed.Get("context_weight", embedder.context_weight);
  Require(embedder.user_weight >= 0 && embedder.context_weight >= 0, "embed",
          "user_weight", "and context_weight must be non-negative");
  embed.Get("l2_normalize", embedder.l2_normalize);

  WorkflowConfig& workflow = config.workflow;
  const Section value(root, "value");
  value.Get("k", workflow.valuation.k);
  Require(workflow.valuation.k >= 1, "value", "k", "must be at least 1");
  value.Get("threads", workflow.valuation.threads);
  Require(workflow.valuation.threads >= 1, "value", "threads", "must be at least 1");
  value.Get("adapt_scale", workflow.adapt_scale);
  Require(workflow.adapt_scale >= 0, "value", "adapt_scale", "must be non-negative");

  const Section denoise(root, "denoise");
  std::string policy(ToString(workflow.denoise.policy));
  denoise.Get("policy", policy);
  workflow.denoise.policy = ParseConflictPolicy(policy);
  denoise.Get("upsample_dev", workflow.denoise.upsample_dev);
  denoise.Get("upsample_clean", workflow.denoise.upsample_clean);
  denoise.Get("upsample_ratio", workflow.denoise.upsample_ratio);
  Require(workflow.denoise.upsample_ratio > 0 && workflow.denoise.upsample_ratio <= 1,
          "denoise", "upsample_ratio", "must be in (0, 1]");

  const Section train(root, "train");
  train.Get("learning_rate", workflow.train.learning_rate);
  Require(workflow.train.learning_rate > 0, "train", "learning_rate", "must be positive");
  train.Get("epochs", workflow.train.epochs);
  Require(workflow.train.epochs >= 1, "train", "epochs", "must be positive");
  train.Get("l2_penalty", workflow.train.l2_penalty);
  Require(workflow.train.l2_penalty >= 0, "train", "l2_penalty", "must be non-negative");
  std::string detector(ToString(workflow.detector));
  train.Get("detector", detector);
  workflow.detector = ParseDetector(detector);

  const Section eval(root, "eval");
  eval.Get("beta", workflow.beta);
  Require(workflow.beta > 0, "eval", "beta", "must be positive");

  const Section curve(root, "curve");
  if (curve.Find("strategies") != nullptr) {
    std::vector<std::string> names;
    curve.Get("strategies", names);
    Require(!names.empty(), "curve", "strategies", "must not be empty");
    config.curve.strategies.clear();
    for (const std::string& name : names) {
      config.curve.strategies.push_back(ParseRemovalStrategy(name));
    }
  }
  std::string set = "weak";
  curve.Get("set", set);
  if (set == "weak") {
    config.curve.set = CurveSet::kWeak;
  } else if (set == "duplicated") {
    config.curve.set = CurveSet::kDuplicated;
  } else {
    throw ConfigError("curve.set must be weak or duplicated");
  }
  std::int64_t step = static_cast<std::int64_t>(config.curve.step);
  curve.Get("step", step);
  Require(step >= 1, "curve", "step", "must be at least 1");
  config.curve.step = static_cast<std::size_t>(step);
  std::int64_t max_removed = 0;
  curve.Get("max_removed", max_removed);
  Require(max_removed >= 0, "curve", "max_removed", "must be non-negative");
  config.curve.max_removed = static_cast<std::size_t>(max_removed);
  curve.Get("refit_head", config.curve.refit_head);

  const Section synth(root, "synth");
  SynthStageConfig& s = config.synth;
  synth.Get("train_dialogs", s.train_dialogs);
  synth.Get("dev_dialogs", s.dev_dialogs);
  synth.Get("test_dialogs", s.test_dialogs);
  synth.Get("turns_per_dialog", s.base.turns_per_dialog);
  Require(s.train_dialogs >= 1 && s.dev_dialogs >= 1 && s.test_dialogs >= 1 &&
              s.base.turns_per_dialog >= 1,
          "synth", "counts", "must be at least 1");
  synth.Get("disengaged_rate", s.base.disengaged_rate);
  CheckRate(s.base.disengaged_rate, "synth", "disengaged_rate");
  synth.Get("noise_rate", s.base.noise_rate);
  CheckRate(s.base.noise_rate, "synth", "noise_rate");
  synth.Get("paraphrase_rate", s.base.paraphrase_rate);
  CheckRate(s.base.paraphrase_rate, "synth", "paraphrase_rate");
  synth.Get("hard_negative_rate", s.base.hard_negative_rate);
  CheckRate(s.base.hard_negative_rate, "synth", "hard_negative_rate");
  if (synth.Find("group_weights") != nullptr) {
    std::vector<double> weights;
    synth.Get("group_weights", weights);
    Require(weights.size() == 4, "synth", "group_weights", "must have 4 entries");
    for (double w : weights) Require(w >= 0, "synth", "group_weights", "must be non-negative");
    std::copy(weights.begin(), weights.end(), s.base.group_weights.begin());
  }
  std::string mode(ToString(s.base.source_mode));
  synth.Get("source_mode", mode);
  try {
    s.base.source_mode = ParseSourceMode(mode);
  } catch (const Error&) {
    throw ConfigError("synth.source_mode must be text or asr");
  }
  return config;
}

PipelineConfig LoadPipelineConfig(const fs::path& path, const EnvLookup& env) {
  if (!fs::exists(path)) throw ConfigError("config file not found: " + path.string());
  return ParsePipelineConfig(ReadFile(path), path.parent_path(), env);
}

OrderedJson PipelineConfig::ToJson() const {
  std::vector<std::string> strategies;
  for (RemovalStrategy strategy : curve.strategies) {
    strategies.emplace_back(ToString(strategy));
  }
  const EmbedderConfig& e = embed.embedder;
  const SynthConfig& b = synth.base;
  return {
      {"seed", seed},
      {"paths",
       {{"train", paths.train_corpus.string()},
        {"dev", paths.dev_corpus.string()},
        {"test", paths.test_corpus.string()},
        {"rules", paths.rules.string()},
        {"out_dir", paths.out_dir.string()},
        {"train_embeddings", paths.train_embeddings.string()},
        {"dev_embeddings", paths.dev_embeddings.string()},
        {"test_embeddings", paths.test_embeddings.string()}}},
      {"label",
       {{"groups", label.groups},
        {"use_regex", label.use_regex},
        {"use_dialog_acts", label.use_dialog_acts},
        {"tagger_url", label.tagger_url},
        {"tagger_timeout", label.tagger_timeout},
        {"planted_noise", label.planted_noise}}},
      {"embed",
       {{"source", embed.source == EmbedSource::kBuiltin ? "builtin" : "load"},
        {"dim", e.dim},
        {"context_depth", e.context_depth},
        {"user_weight", e.user_weight},
        {"context_weight", e.context_weight},
        {"l2_normalize", e.l2_normalize}}},
      {"value",
       {{"k", workflow.valuation.k},
        {"threads", workflow.valuation.threads},
        {"adapt_scale", workflow.adapt_scale}}},
      {"denoise",
       {{"policy", ToString(workflow.denoise.policy)},
        {"upsample_dev", workflow.denoise.upsample_dev},
        {"upsample_clean", workflow.denoise.upsample_clean},
        {"upsample_ratio", workflow.denoise.upsample_ratio}}},
      {"train",
       {{"learning_rate", workflow.train.learning_rate},
        {"epochs", workflow.train.epochs},
        {"l2_penalty", workflow.train.l2_penalty},
        {"detector", ToString(workflow.detector)}}},
      {"eval", {{"beta", workflow.beta}}},
      {"curve",
       {{"strategies", strategies},
        {"set", curve.set == CurveSet::kWeak ? "weak" : "duplicated"},
        {"step", curve.step},
        {"max_removed", curve.max_removed},
        {"refit_head", curve.refit_head}}},
      {"synth",
       {{"train_dialogs", synth.train_dialogs},
        {"dev_dialogs", synth.dev_dialogs},
        {"test_dialogs", synth.test_dialogs},
        {"turns_per_dialog", b.turns_per_dialog},
        {"disengaged_rate", b.disengaged_rate},
        {"noise_rate", b.noise_rate},
        {"paraphrase_rate", b.paraphrase_rate},
        {"hard_negative_rate", b.hard_negative_rate},
        {"group_weights", b.group_weights},
        {"source_mode", ToString(b.source_mode)}}},
  };
}

std::string_view ToString(Stage stage) {
  switch (stage) {
    case Stage::kLabel:
      return "label";
    case Stage::kEmbed:
      return "embed";
    case Stage::kValue:
      return "value";
    case Stage::kDenoise:
      return "denoise";
    case Stage::kTrain:
      return "train";
    case Stage::kEval:
      return "eval";
    case Stage::kCurve:
      return "curve";
    case Stage::kAblate:
      return "ablate";
    case Stage::kSynth:
      return "synth";
  }
  return "label";
}

Stage ParseStage(std::string_view text) {
  for (Stage stage : {Stage::kLabel, Stage::kEmbed, Stage::kValue, Stage::kDenoise,
                      Stage::kTrain, Stage::kEval, Stage::kCurve, Stage::kAblate,
                      Stage::kSynth}) {
    if (ToString(stage) == text) return stage;
  }
  throw ConfigError("unknown stage \"" + std::string(text) + "\"");
}

fs::path ArtifactPaths::Model(Variant variant) const {
  return out_dir / (StageName("model", variant) + ".json");
}

fs::path ArtifactPaths::Report(Variant variant) const {
  return out_dir / (StageName("eval", variant) + ".json");
}

fs::path ArtifactPaths::Curve(RemovalStrategy strategy, bool accuracy) const {
  std::string name = "curve." + std::string(ToString(strategy));
  if (accuracy) name += ".accuracy";
  return out_dir / (name + ".csv");
}

fs::path ArtifactPaths::Manifest(std::string_view stage) const {
  return out_dir / (std::string(stage) + ".manifest.json");
}

ArtifactPaths ArtifactsOf(const PipelineConfig& config) {
  const fs::path& out = config.paths.out_dir;
  ArtifactPaths paths;
  paths.out_dir = out;
  paths.weak_labels = out / "weak_labels.jsonl";
  paths.train_embeddings = out / "train.hemb";
  paths.dev_embeddings = out / "dev.hemb";
  paths.test_embeddings = out / "test.hemb";
  paths.scores = out / "scores.jsonl";
  paths.clean = out / "clean.jsonl";
  paths.ablation = out / "ablation.json";
  return paths;
}

StageResult RunStage(Stage stage, const PipelineConfig& config, Variant variant) {
  spdlog::info("stage {}", ToString(stage));
  switch (stage) {
    case Stage::kLabel:
      return RunLabel(config);
    case Stage::kEmbed:
      return RunEmbed(config);
    case Stage::kValue:
      return RunValue(config);
    case Stage::kDenoise:
      return RunDenoise(config);
    case Stage::kTrain:
      return RunTrain(config, variant);
    case Stage::kEval:
      return RunEval(config, variant);
    case Stage::kCurve:
      return RunCurve(config);
    case Stage::kAblate:
      return RunAblate(config);
    case Stage::kSynth:
      return RunSynth(config);
  }
  throw InvalidArgument("unknown stage");
}

MetricReport RunAll(const PipelineConfig& config, Variant variant) {
  std::vector<Stage> stages;
  if (variant != Variant::kDevOnly) stages.push_back(Stage::kLabel);
  stages.push_back(Stage::kEmbed);
  if (variant == Variant::kHerald) {
    stages.push_back(Stage::kValue);
    stages.push_back(Stage::kDenoise);
  }
  stages.push_back(Stage::kTrain);
  stages.push_back(Stage::kEval);
  std::optional<MetricReport> report;
  for (Stage stage : stages) report = RunStage(stage, config, variant).report;
  return *report;
}

SynthSplits SynthExperiment(const SynthStageConfig& config, std::uint64_t seed) {
  auto split = [&](int dialogs, std::uint64_t offset, std::string_view prefix,
                   CorpusRole role) {
    SynthConfig c = config.base;
    c.n_dialogs = dialogs;
    c.seed = seed * 1000 + offset;
    c.id_prefix = std::string(prefix);
    c.role = role;
    return SynthCorpus(c);
  };
  return {split(config.train_dialogs, 1, "train", CorpusRole::kTrain),
          split(config.dev_dialogs, 2, "dev", CorpusRole::kDev),
          split(config.test_dialogs, 3, "test", CorpusRole::kTest)};
}

WorkflowInputs PrepareInputs(const SynthSplits& splits, const RuleSet& rules,
                             const PipelineConfig& config) {
  RuleSet variant = rules;
  variant.enabled_groups = config.label.groups;
  variant.use_regex = config.label.use_regex;
  variant.use_dialog_acts = config.label.use_dialog_acts;
  WorkflowInputs inputs;
  inputs.weak = ToWeakLabels(LabelCorpus(splits.train, variant));
  if (config.label.planted_noise) {
    inputs.weak = ApplyPlantedNoise(inputs.weak, splits.train);
  }
  const EmbedderConfig& embedder = config.embed.embedder;
  inputs.train_embeddings = EmbedCorpusBuiltin(splits.train, embedder);
  inputs.dev = GoldFeatures(splits.dev, EmbedCorpusBuiltin(splits.dev, embedder));
  inputs.test = GoldFeatures(splits.test, EmbedCorpusBuiltin(splits.test, embedder));
  return inputs;
}

}  // namespace herald

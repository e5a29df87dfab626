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


// File-based two-stage pipeline driven by one TOML config.
//
// Every stage reads its inputs from disk, writes its artifacts atomically
// under paths.out_dir, and records a "<stage>.manifest.json" beside them
// holding the SHA-256 of each input and output, the effective config, the
// tool version, and a timestamp. Artifacts themselves carry no timestamps,
// so rerunning a stage on identical inputs reproduces them byte for byte.
//
// Config keys can be overridden from the environment as
// HERALD_<SECTION>_<KEY> (e.g. HERALD_VALUE_K=5) or HERALD_<KEY> for
// top-level keys. Values are read as JSON (numbers, booleans, arrays),
// falling back to plain strings.

#ifndef HERALD_PIPELINE_H_
#define HERALD_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "herald/corpus.h"
#include "herald/embedding.h"
#include "herald/experiments.h"
#include "herald/metrics.h"
#include "herald/synth.h"
#include "herald/workflow.h"

namespace herald {

struct PipelinePaths {
  std::filesystem::path train_corpus;
  std::filesystem::path dev_corpus;
  std::filesystem::path test_corpus;
  std::filesystem::path rules;  // Empty: the built-in rule program.
  std::filesystem::path out_dir = "out";
  // External encoder output, used when embed.source is "load".
  std::filesystem::path train_embeddings;
  std::filesystem::path dev_embeddings;
  std::filesystem::path test_embeddings;
};

struct LabelStageConfig {
  std::set<int> groups = {1, 2, 3, 4};
  bool use_regex = true;
  bool use_dialog_acts = true;
  std::string tagger_url;  // Empty: tags come from the corpus only.
  double tagger_timeout = 5.0;
  // Apply each turn's "noisy_label" channel to its weak label (synthetic
  // corpora only).
  bool planted_noise = false;
};

enum class EmbedSource { kBuiltin, kLoad };

struct EmbedStageConfig {
  EmbedSource source = EmbedSource::kBuiltin;
  EmbedderConfig embedder;
};

enum class CurveSet { kWeak, kDuplicated };

struct CurveStageConfig {
  std::vector<RemovalStrategy> strategies = {
      RemovalStrategy::kLowFirst, RemovalStrategy::kHighFirst,
      RemovalStrategy::kRandom};
  CurveSet set = CurveSet::kWeak;
  std::size_t step = 50;
  std::size_t max_removed = 0;
  bool refit_head = false;
};

struct SynthStageConfig {
  SynthConfig base;
  int train_dialogs = 400;
  int dev_dialogs = 40;
  int test_dialogs = 80;
};

struct PipelineConfig {
  PipelinePaths paths;
  LabelStageConfig label;
  EmbedStageConfig embed;
  WorkflowConfig workflow;
  CurveStageConfig curve;
  SynthStageConfig synth;
  std::uint64_t seed = 0;

  OrderedJson ToJson() const;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
// Reads the process environment.
std::optional<std::string> ProcessEnv(const std::string& name);

// Relative paths resolve against `base_dir`. Unknown sections or keys, bad
// types and out-of-range values throw ConfigError.
PipelineConfig ParsePipelineConfig(std::string_view toml_text,
                                   const std::filesystem::path& base_dir,
                                   const EnvLookup& env = ProcessEnv);
PipelineConfig LoadPipelineConfig(const std::filesystem::path& path,
                                  const EnvLookup& env = ProcessEnv);

enum class Stage { kLabel, kEmbed, kValue, kDenoise, kTrain, kEval, kCurve, kAblate, kSynth };
std::string_view ToString(Stage stage);
Stage ParseStage(std::string_view text);

// Artifact locations under paths.out_dir.
struct ArtifactPaths {
  std::filesystem::path weak_labels;
  std::filesystem::path train_embeddings;
  std::filesystem::path dev_embeddings;
  std::filesystem::path test_embeddings;
  std::filesystem::path scores;
  std::filesystem::path clean;
  std::filesystem::path ablation;

  // Baselines get their own model and report so they never overwrite the
  // denoised run: model.json, model.weak.json, model.dev-only.json.
  std::filesystem::path Model(Variant variant) const;
  std::filesystem::path Report(Variant variant) const;
  std::filesystem::path Curve(RemovalStrategy strategy, bool accuracy) const;
  std::filesystem::path Manifest(std::string_view stage) const;

  std::filesystem::path out_dir;
};
ArtifactPaths ArtifactsOf(const PipelineConfig& config);

struct StageResult {
  std::vector<std::filesystem::path> artifacts;
  std::optional<MetricReport> report;  // kEval only.
};

// `variant` selects the training set for kTrain and the model for kEval;
// other stages ignore it. Throws MissingPrerequisite naming the missing file
// and the stage that produces it.
StageResult RunStage(Stage stage, const PipelineConfig& config,
                     Variant variant = Variant::kHerald);

// label, embed, value, denoise, train, eval; baselines skip valuation and
// denoising (and dev-only also labeling). Returns the final report.
MetricReport RunAll(const PipelineConfig& config,
                    Variant variant = Variant::kHerald);

// The three synthetic splits derived from one seed: split s
// (1 train, 2 dev, 3 test) uses seed * 1000 + s.
struct SynthSplits {
  Corpus train;
  Corpus dev;
  Corpus test;
};
SynthSplits SynthExperiment(const SynthStageConfig& config, std::uint64_t seed);

// The label and builtin embed stages in memory, with the label and embed
// settings of `config`. No tagger is consulted.
WorkflowInputs PrepareInputs(const SynthSplits& splits, const RuleSet& rules,
                             const PipelineConfig& config);

}  // namespace herald

#endif  // HERALD_PIPELINE_H_

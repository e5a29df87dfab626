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


// The two-stage workflow on in-memory data: weak labels from heuristics,
// duplicate-and-flip valuation against the dev set, denoising, and a final
// detector evaluated on the test set. The file-based pipeline and the
// experiments are built from these steps.

#ifndef HERALD_WORKFLOW_H_
#define HERALD_WORKFLOW_H_

#include <span>
#include <string_view>
#include <vector>

#include "herald/corpus.h"
#include "herald/denoiser.h"
#include "herald/embedding.h"
#include "herald/heuristics.h"
#include "herald/metrics.h"
#include "herald/model.h"
#include "herald/valuation.h"

namespace herald {

// Rows of a feature space paired with one label each; keys may repeat.
struct LabeledFeatures {
  std::vector<TurnKey> keys;
  FeatureMatrix features;
  std::vector<Label> labels;
};

LabeledFeatures Gather(const EmbeddingMatrix& embeddings,
                       std::span<const TurnKey> keys,
                       std::span<const Label> labels);
// Every turn of a gold-labeled corpus, in corpus order.
LabeledFeatures GoldFeatures(const Corpus& corpus,
                             const EmbeddingMatrix& embeddings);
LabeledFeatures WeakFeatures(const WeakLabelMap& weak,
                             const EmbeddingMatrix& embeddings);
LabeledFeatures DuplicatedFeatures(const DuplicatedDataset& duplicated,
                                   const EmbeddingMatrix& embeddings);
LabeledFeatures CleanFeatures(const CleanDataset& clean,
                              const EmbeddingMatrix& embeddings);
LabeledFeatures Upsample(const LabeledFeatures& set, double ratio = 1.0);

// Flips the weak label of every turn whose "noisy_label" differs from its
// gold label. Turns without both fields are left alone.
WeakLabelMap ApplyPlantedNoise(const WeakLabelMap& weak, const Corpus& corpus);

enum class Detector { kLinear, kKnn };
std::string_view ToString(Detector detector);
Detector ParseDetector(std::string_view text);

enum class Variant { kHerald, kWeak, kDevOnly };
std::string_view ToString(Variant variant);
// Accepts herald, weak and dev-only.
Variant ParseVariant(std::string_view text);

struct WorkflowConfig {
  ValuationConfig valuation;
  // Weight of the weak-label posterior column appended to the features
  // before valuation; 0 values in the raw feature space.
  double adapt_scale = 20.0;
  DenoiseConfig denoise;
  TrainConfig train;
  Detector detector = Detector::kLinear;
  double beta = 2.0;
};

// The space in which training points are valued. A fixed feature map knows
// nothing about the labels, so every point far from the dev set would be
// valued by near-arbitrary distance ranks. Appending the posterior of a
// linear head fit to the weak labels pulls points the weak labels agree on
// together, and the dev set then arbitrates within and across those groups.
struct ValuationSpace {
  double scale = 0.0;
  LinearHead head;

  FeatureMatrix Map(const FeatureMatrix& features) const;
};

// Fits the head on the up-sampled weak set with config.train. Returns the
// identity space when config.adapt_scale is 0.
ValuationSpace BuildValuationSpace(const LabeledFeatures& weak,
                                   const WorkflowConfig& config);

// Scores for every duplicated entry, against the (optionally up-sampled)
// dev set, both mapped into `space`.
ShapleyScores ValueEntries(const LabeledFeatures& entries,
                           const LabeledFeatures& dev,
                           const ValuationSpace& space,
                           const WorkflowConfig& config);

struct WorkflowInputs;

// Both labeled copies of every weak-labeled turn valued against the dev set
// in the space adapted to the weak labels. Scores are aligned with
// DuplicateAllLabels(inputs.weak).
ShapleyScores ValueDuplicated(const WorkflowInputs& inputs,
                              const DuplicatedDataset& duplicated,
                              const WorkflowConfig& config);

// Value of each weak-labeled turn's copy carrying its weak label, in
// weak-map order. `scores` is aligned with `duplicated`.
std::vector<double> WeakCopyScores(const WeakLabelMap& weak,
                                   const DuplicatedDataset& duplicated,
                                   std::span<const double> scores);

struct FittedDetector {
  Detector kind = Detector::kLinear;
  LinearHead head;
  KnnModel knn;

  std::vector<Label> Predict(const FeatureMatrix& features) const;
};

// Fits on `training`, up-sampled first when config.denoise.upsample_clean.
FittedDetector FitDetector(const LabeledFeatures& training,
                           const WorkflowConfig& config);

struct WorkflowInputs {
  WeakLabelMap weak;
  EmbeddingMatrix train_embeddings;
  LabeledFeatures dev;
  LabeledFeatures test;
};

struct VariantResult {
  Variant variant = Variant::kHerald;
  MetricReport report;
  std::size_t training_rows = 0;  // Before up-sampling.
  std::size_t flipped = 0;        // kHerald only.
  std::size_t dropped = 0;        // kHerald only: weak keys with no survivor.
};

VariantResult RunVariant(Variant variant, const WorkflowInputs& inputs,
                         const WorkflowConfig& config);

}  // namespace herald

#endif  // HERALD_WORKFLOW_H_

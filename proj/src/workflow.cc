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


#include "herald/workflow.h"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

#include "herald/error.h"
#include "herald/synth.h"

namespace herald {

LabeledFeatures Gather(const EmbeddingMatrix& embeddings,
                       std::span<const TurnKey> keys,
                       std::span<const Label> labels) {
  if (keys.size() != labels.size()) {
    throw InvalidArgument("keys and labels differ in length");
  }
  LabeledFeatures out;
  out.keys.assign(keys.begin(), keys.end());
  out.labels.assign(labels.begin(), labels.end());
  out.features = embeddings.features().Gather(embeddings.IndicesOf(keys));
  return out;
}

LabeledFeatures GoldFeatures(const Corpus& corpus,
                             const EmbeddingMatrix& embeddings) {
  std::vector<TurnKey> keys;
  std::vector<Label> labels;
  for (const Dialog& dialog : corpus.dialogs) {
    for (const Turn& turn : dialog.turns) {
      const TurnKey key{dialog.dialog_id, turn.index};
      if (!turn.gold_label) throw DataError("missing gold label at " + key.ToString());
      keys.push_back(key);
      labels.push_back(*turn.gold_label);
    }
  }
  return Gather(embeddings, keys, labels);
}

LabeledFeatures WeakFeatures(const WeakLabelMap& weak,
                             const EmbeddingMatrix& embeddings) {
  std::vector<TurnKey> keys;
  std::vector<Label> labels;
  for (const auto& [key, record] : weak) {
    keys.push_back(key);
    labels.push_back(record.label);
  }
  return Gather(embeddings, keys, labels);
}

LabeledFeatures DuplicatedFeatures(const DuplicatedDataset& duplicated,
                                   const EmbeddingMatrix& embeddings) {
  std::vector<TurnKey> keys;
  std::vector<Label> labels;
  for (const DuplicatedEntry& entry : duplicated) {
    keys.push_back(entry.key);
    labels.push_back(entry.label);
  }
  return Gather(embeddings, keys, labels);
}

LabeledFeatures CleanFeatures(const CleanDataset& clean,
                              const EmbeddingMatrix& embeddings) {
  std::vector<TurnKey> keys;
  std::vector<Label> labels;
  for (const CleanEntry& entry : clean) {
    keys.push_back(entry.key);
    labels.push_back(entry.label);
  }
  return Gather(embeddings, keys, labels);
}

LabeledFeatures Upsample(const LabeledFeatures& set, double ratio) {
  const std::vector<std::size_t> rows = UpsampleIndices(set.labels, ratio);
  LabeledFeatures out;
  out.features = set.features.Gather(rows);
  for (std::size_t i : rows) {
    out.keys.push_back(set.keys[i]);
    out.labels.push_back(set.labels[i]);
  }
  return out;
}

WeakLabelMap ApplyPlantedNoise(const WeakLabelMap& weak, const Corpus& corpus) {
  const CorpusIndex index(corpus);
  WeakLabelMap out = weak;
  for (auto& [key, record] : out) {
    const Turn& turn = index.Resolve(key);
    const std::optional<Label> noisy = NoisyLabel(turn);
    if (noisy && turn.gold_label && *noisy != *turn.gold_label) {
      record.label = Flip(record.label);
    }
  }
  return out;
}

std::string_view ToString(Detector detector) {
  return detector == Detector::kKnn ? "knn" : "linear";
}

Detector ParseDetector(std::string_view text) {
  if (text == "linear") return Detector::kLinear;
  if (text == "knn") return Detector::kKnn;
  throw ConfigError("unknown detector \"" + std::string(text) +
                    "\" (expected linear or knn)");
}

std::string_view ToString(Variant variant) {
  switch (variant) {
    case Variant::kHerald:
      return "herald";
    case Variant::kWeak:
      return "weak";
    case Variant::kDevOnly:
      return "dev-only";
  }
  return "herald";
}

Variant ParseVariant(std::string_view text) {
  if (text == "herald") return Variant::kHerald;
  if (text == "weak") return Variant::kWeak;
  if (text == "dev-only" || text == "dev_only") return Variant::kDevOnly;
  throw ConfigError("unknown baseline \"" + std::string(text) +
                    "\" (expected weak or dev-only)");
}

FeatureMatrix ValuationSpace::Map(const FeatureMatrix& features) const {
  if (scale == 0.0) return features;
  const std::size_t dim = features.dim();
  FeatureMatrix out(features.rows(), dim + 1);
  for (std::size_t i = 0; i < features.rows(); ++i) {
    const auto row = features.Row(i);
    auto mapped = out.MutableRow(i);
    std::copy(row.begin(), row.end(), mapped.begin());
    mapped[dim] = static_cast<float>(scale * PredictLinear(head, row)[1]);
  }
  return out;
}

ValuationSpace BuildValuationSpace(const LabeledFeatures& weak,
                                   const WorkflowConfig& config) {
  if (config.adapt_scale < 0.0) {
    throw InvalidArgument("adapt_scale must be non-negative");
  }
  ValuationSpace space;
  if (config.adapt_scale == 0.0) return space;
  const LabeledFeatures balanced = Upsample(weak, config.denoise.upsample_ratio);
  space.head = TrainLinearHead(balanced.features, balanced.labels, config.train).head;
  space.scale = config.adapt_scale;
  return space;
}

ShapleyScores ValueEntries(const LabeledFeatures& entries,
                           const LabeledFeatures& dev,
                           const ValuationSpace& space,
                           const WorkflowConfig& config) {
  const LabeledFeatures anchor =
      config.denoise.upsample_dev ? Upsample(dev, config.denoise.upsample_ratio) : dev;
  return ShapleyMultiDev(space.Map(entries.features), entries.labels,
                         space.Map(anchor.features), anchor.labels,
                         config.valuation);
}

std::vector<double> WeakCopyScores(const WeakLabelMap& weak,
                                   const DuplicatedDataset& duplicated,
                                   std::span<const double> scores) {
  if (scores.size() != duplicated.size()) {
    throw InvalidArgument("scores do not match the duplicated dataset");
  }
  std::map<std::pair<TurnKey, Label>, double> by_copy;
  for (std::size_t i = 0; i < duplicated.size(); ++i) {
    by_copy[{duplicated[i].key, duplicated[i].label}] = scores[i];
  }
  std::vector<double> out;
  out.reserve(weak.size());
  for (const auto& [key, record] : weak) {
    const auto it = by_copy.find({key, record.label});
    if (it == by_copy.end()) {
      throw InvalidArgument("no scored copy for " + key.ToString());
    }
    out.push_back(it->second);
  }
  return out;
}

std::vector<Label> FittedDetector::Predict(const FeatureMatrix& features) const {
  std::vector<Label> out;
  out.reserve(features.rows());
  for (std::size_t i = 0; i < features.rows(); ++i) {
    out.push_back(kind == Detector::kKnn ? KnnPredict(knn, features.Row(i)).label
                                         : DecideLinear(head, features.Row(i)));
  }
  return out;
}

FittedDetector FitDetector(const LabeledFeatures& training,
                           const WorkflowConfig& config) {
  const LabeledFeatures set = config.denoise.upsample_clean
                                  ? Upsample(training, config.denoise.upsample_ratio)
                                  : training;
  FittedDetector detector;
  detector.kind = config.detector;
  if (config.detector == Detector::kKnn) {
    detector.knn = {set.features, set.labels, config.valuation.k};
  } else {
    detector.head = TrainLinearHead(set.features, set.labels, config.train).head;
  }
  return detector;
}

ShapleyScores ValueDuplicated(const WorkflowInputs& inputs,
                              const DuplicatedDataset& duplicated,
                              const WorkflowConfig& config) {
  const LabeledFeatures entries =
      DuplicatedFeatures(duplicated, inputs.train_embeddings);
  const ValuationSpace space = BuildValuationSpace(
      WeakFeatures(inputs.weak, inputs.train_embeddings), config);
  return ValueEntries(entries, inputs.dev, space, config);
}

VariantResult RunVariant(Variant variant, const WorkflowInputs& inputs,
                         const WorkflowConfig& config) {
  VariantResult result;
  result.variant = variant;
  LabeledFeatures training;
  switch (variant) {
    case Variant::kHerald: {
      const DuplicatedDataset duplicated = DuplicateAllLabels(inputs.weak);
      const ShapleyScores scores = ValueDuplicated(inputs, duplicated, config);
      const CleanDataset clean = Denoise(duplicated, scores.values, config.denoise);
      std::set<TurnKey> kept;
      for (const CleanEntry& entry : clean) {
        result.flipped += entry.flipped;
        kept.insert(entry.key);
      }
      result.dropped = inputs.weak.size() - kept.size();
      training = CleanFeatures(clean, inputs.train_embeddings);
      break;
    }
    case Variant::kWeak:
      training = WeakFeatures(inputs.weak, inputs.train_embeddings);
      break;
    case Variant::kDevOnly:
      training = inputs.dev;
      break;
  }
  result.training_rows = training.labels.size();
  const FittedDetector detector = FitDetector(training, config);
  result.report = Evaluate(detector.Predict(inputs.test.features),
                           inputs.test.labels, config.beta);
  return result;
}

}  // namespace herald

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


// Disengagement detectors over a fixed feature map: a K-nearest-neighbor
// vote and a linear softmax head trained by full-batch gradient descent.

#ifndef HERALD_MODEL_H_
#define HERALD_MODEL_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "herald/corpus.h"
#include "herald/embedding.h"

namespace herald {

using Posterior = std::array<double, 2>;  // Indexed by ToInt(label).

struct KnnModel {
  FeatureMatrix reference;
  std::vector<Label> labels;
  int k = 10;
};

struct KnnPrediction {
  // Share of the K nearest neighbors with each label, over K even when the
  // reference set is smaller.
  Posterior posterior{};
  // Argmax; an even vote goes to the nearest neighbor's label.
  Label label = Label::kEngaged;
};

// Neighbors ordered as in valuation (distance, then index). Throws
// InvalidArgument on an empty reference, k < 1, or dimension mismatch.
KnnPrediction KnnPredict(const KnnModel& model, std::span<const float> x);

// Decision from neighbor labels already in distance order.
KnnPrediction KnnVote(std::span<const Label> nearest_first, int k);

struct LinearHead {
  std::size_t dim = 0;
  std::vector<double> weights;  // dim x 2, row-major: weights[d * 2 + c].
  std::array<double, 2> bias{};

  static LinearHead Zero(std::size_t dim);
  bool operator==(const LinearHead&) const = default;
};

struct TrainConfig {
  double learning_rate = 0.1;
  int epochs = 500;
  double l2_penalty = 1e-4;
  // Initialization is zero, so the seed only feeds the model metadata.
  std::uint64_t seed = 0;
};

struct LossAndGradient {
  double loss = 0.0;
  LinearHead gradient;
};

// Mean cross-entropy plus (l2 / 2) * ||W||^2 (bias unregularized), and its
// exact gradient. Throws InvalidArgument on shape mismatch or empty input.
LossAndGradient LossAndGrad(const LinearHead& head, const FeatureMatrix& features,
                            std::span<const Label> labels, double l2);

struct TrainResult {
  LinearHead head;
  // Loss before each update; one entry per epoch.
  std::vector<double> loss_trace;
};

// Throws InvalidArgument when the labels hold one class only, and DataError
// when the loss stops being finite.
TrainResult TrainLinearHead(const FeatureMatrix& features,
                            std::span<const Label> labels,
                            const TrainConfig& config);

Posterior PredictLinear(const LinearHead& head, std::span<const float> x);
// Label 1 when P(1) > 0.5.
Label DecideLinear(const LinearHead& head, std::span<const float> x);

struct ModelFile {
  LinearHead head;
  OrderedJson metadata = OrderedJson::object();
};

std::string SerializeModel(const ModelFile& model);
ModelFile ParseModel(std::string_view text);
void SaveModel(const ModelFile& model, const std::filesystem::path& path);
ModelFile LoadModel(const std::filesystem::path& path);

}  // namespace herald

#endif  // HERALD_MODEL_H_

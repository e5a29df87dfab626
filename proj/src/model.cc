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


#include "herald/model.h"

#include <algorithm>
#include <cmath>

#include "herald/error.h"
#include "herald/file_util.h"
#include "herald/valuation.h"

namespace herald {
namespace {

void CheckDim(std::size_t expected, std::size_t got) {
  if (expected != got) {
    throw InvalidArgument("dimension mismatch: model dim " +
                          std::to_string(expected) + ", input dim " +
                          std::to_string(got));
  }
}

std::array<double, 2> Logits(const LinearHead& head, std::span<const float> x) {
  std::array<double, 2> z = head.bias;
  for (std::size_t d = 0; d < head.dim; ++d) {
    const double v = x[d];
    if (v == 0.0) continue;
    z[0] += v * head.weights[2 * d];
    z[1] += v * head.weights[2 * d + 1];
  }
  return z;
}

Posterior Softmax(const std::array<double, 2>& z) {
  const double m = std::max(z[0], z[1]);
  const double e0 = std::exp(z[0] - m);
  const double e1 = std::exp(z[1] - m);
  const double sum = e0 + e1;
  return {e0 / sum, e1 / sum};
}

// log(sum exp(z)) - z[target], computed without overflow.
double CrossEntropy(const std::array<double, 2>& z, int target) {
  const double m = std::max(z[0], z[1]);
  return m + std::log(std::exp(z[0] - m) + std::exp(z[1] - m)) - z[target];
}

// Nonzero columns of each row, for the sparse lexical features.
struct SparseRows {
  std::vector<std::size_t> offsets;
  std::vector<std::uint32_t> columns;
  std::vector<double> values;
};

SparseRows Sparsify(const FeatureMatrix& features) {
  SparseRows rows;
  rows.offsets.reserve(features.rows() + 1);
  rows.offsets.push_back(0);
  for (std::size_t r = 0; r < features.rows(); ++r) {
    const auto row = features.Row(r);
    for (std::size_t d = 0; d < row.size(); ++d) {
      if (row[d] == 0.0f) continue;
      rows.columns.push_back(static_cast<std::uint32_t>(d));
      rows.values.push_back(row[d]);
    }
    rows.offsets.push_back(rows.columns.size());
  }
  return rows;
}

LossAndGradient SparseLossAndGrad(const LinearHead& head, const SparseRows& rows,
                                  std::span<const Label> labels, double l2) {
  const std::size_t n = labels.size();
  LossAndGradient out;
  out.gradient = LinearHead::Zero(head.dim);
  double data_loss = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    std::array<double, 2> z = head.bias;
    for (std::size_t p = rows.offsets[r]; p < rows.offsets[r + 1]; ++p) {
      const std::size_t d = rows.columns[p];
      z[0] += rows.values[p] * head.weights[2 * d];
      z[1] += rows.values[p] * head.weights[2 * d + 1];
    }
    const int y = ToInt(labels[r]);
    data_loss += CrossEntropy(z, y);
    const Posterior p = Softmax(z);
    const double g0 = p[0] - (y == 0 ? 1.0 : 0.0);
    const double g1 = p[1] - (y == 1 ? 1.0 : 0.0);
    out.gradient.bias[0] += g0;
    out.gradient.bias[1] += g1;
    for (std::size_t q = rows.offsets[r]; q < rows.offsets[r + 1]; ++q) {
      const std::size_t d = rows.columns[q];
      out.gradient.weights[2 * d] += rows.values[q] * g0;
      out.gradient.weights[2 * d + 1] += rows.values[q] * g1;
    }
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  double squared_norm = 0.0;
  for (std::size_t i = 0; i < head.weights.size(); ++i) {
    squared_norm += head.weights[i] * head.weights[i];
    out.gradient.weights[i] = out.gradient.weights[i] * inv_n + l2 * head.weights[i];
  }
  out.gradient.bias[0] *= inv_n;
  out.gradient.bias[1] *= inv_n;
  out.loss = data_loss * inv_n + 0.5 * l2 * squared_norm;
  return out;
}

void CheckTrainingShapes(const LinearHead& head, const FeatureMatrix& features,
                         std::span<const Label> labels) {
  if (features.empty()) throw InvalidArgument("empty training set");
  if (labels.size() != features.rows()) {
    throw InvalidArgument("got " + std::to_string(labels.size()) +
                          " labels for " + std::to_string(features.rows()) +
                          " feature rows");
  }
  CheckDim(head.dim, features.dim());
  if (head.weights.size() != 2 * head.dim) {
    throw InvalidArgument("weight matrix must be dim x 2");
  }
}

}  // namespace

KnnPrediction KnnVote(std::span<const Label> nearest_first, int k) {
  if (k < 1) throw InvalidArgument("k must be >= 1");
  if (nearest_first.empty()) throw InvalidArgument("empty reference set");
  const std::size_t top = std::min<std::size_t>(k, nearest_first.size());
  std::size_t ones = 0;
  for (std::size_t i = 0; i < top; ++i) {
    ones += nearest_first[i] == Label::kDisengaged;
  }
  KnnPrediction prediction;
  prediction.posterior[1] = static_cast<double>(ones) / k;
  prediction.posterior[0] = static_cast<double>(top - ones) / k;
  if (prediction.posterior[1] > prediction.posterior[0]) {
    prediction.label = Label::kDisengaged;
  } else if (prediction.posterior[1] < prediction.posterior[0]) {
    prediction.label = Label::kEngaged;
  } else {
    prediction.label = nearest_first[0];
  }
  return prediction;
}

KnnPrediction KnnPredict(const KnnModel& model, std::span<const float> x) {
  if (model.reference.empty()) throw InvalidArgument("empty reference set");
  if (model.labels.size() != model.reference.rows()) {
    throw InvalidArgument("reference labels do not match reference rows");
  }
  const NeighborOrdering ordering = SortNeighbors(model.reference, x);
  const std::size_t top = std::min<std::size_t>(std::max(model.k, 1),
                                                ordering.order.size());
  std::vector<Label> nearest;
  nearest.reserve(top);
  for (std::size_t i = 0; i < top; ++i) {
    nearest.push_back(model.labels[ordering.order[i]]);
  }
  return KnnVote(nearest, model.k);
}

LinearHead LinearHead::Zero(std::size_t dim) {
  LinearHead head;
  head.dim = dim;
  head.weights.assign(2 * dim, 0.0);
  return head;
}

LossAndGradient LossAndGrad(const LinearHead& head, const FeatureMatrix& features,
                            std::span<const Label> labels, double l2) {
  CheckTrainingShapes(head, features, labels);
  return SparseLossAndGrad(head, Sparsify(features), labels, l2);
}

TrainResult TrainLinearHead(const FeatureMatrix& features,
                            std::span<const Label> labels,
                            const TrainConfig& config) {
  if (!(config.learning_rate > 0.0)) {
    throw InvalidArgument("learning rate must be positive");
  }
  if (config.epochs < 0) throw InvalidArgument("epochs must be >= 0");
  TrainResult result;
  result.head = LinearHead::Zero(features.dim());
  CheckTrainingShapes(result.head, features, labels);
  const bool has_positive =
      std::find(labels.begin(), labels.end(), Label::kDisengaged) != labels.end();
  const bool has_negative =
      std::find(labels.begin(), labels.end(), Label::kEngaged) != labels.end();
  if (!has_positive || !has_negative) {
    throw InvalidArgument("training data must contain both labels");
  }

  const SparseRows rows = Sparsify(features);
  result.loss_trace.reserve(config.epochs);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const LossAndGradient step =
        SparseLossAndGrad(result.head, rows, labels, config.l2_penalty);
    if (!std::isfinite(step.loss)) {
      throw DataError("training diverged at epoch " + std::to_string(epoch) +
                      " (non-finite loss); try a smaller learning rate");
    }
    result.loss_trace.push_back(step.loss);
    for (std::size_t i = 0; i < result.head.weights.size(); ++i) {
      result.head.weights[i] -= config.learning_rate * step.gradient.weights[i];
    }
    result.head.bias[0] -= config.learning_rate * step.gradient.bias[0];
    result.head.bias[1] -= config.learning_rate * step.gradient.bias[1];
  }
  return result;
}

Posterior PredictLinear(const LinearHead& head, std::span<const float> x) {
  CheckDim(head.dim, x.size());
  return Softmax(Logits(head, x));
}

Label DecideLinear(const LinearHead& head, std::span<const float> x) {
  return PredictLinear(head, x)[1] > 0.5 ? Label::kDisengaged : Label::kEngaged;
}

std::string SerializeModel(const ModelFile& model) {
  OrderedJson out;
  out["dim"] = model.head.dim;
  out["weights"] = model.head.weights;
  out["bias"] = model.head.bias;
  out["metadata"] = model.metadata;
  return out.dump(2) + "\n";
}

ModelFile ParseModel(std::string_view text) {
  ModelFile model;
  try {
    const OrderedJson in = OrderedJson::parse(text);
    model.head.dim = in.at("dim").get<std::size_t>();
    model.head.weights = in.at("weights").get<std::vector<double>>();
    const auto bias = in.at("bias").get<std::vector<double>>();
    if (bias.size() != 2) throw DataError("model bias must have 2 entries");
    model.head.bias = {bias[0], bias[1]};
    if (in.contains("metadata")) model.metadata = in.at("metadata");
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  }
  if (model.head.weights.size() != 2 * model.head.dim) {
    throw DataError("model weights must have 2 * dim = " +
                    std::to_string(2 * model.head.dim) + " entries, got " +
                    std::to_string(model.head.weights.size()));
  }
  for (double w : model.head.weights) {
    if (!std::isfinite(w)) throw DataError("model has non-finite weights");
  }
  return model;
}

void SaveModel(const ModelFile& model, const std::filesystem::path& path) {
  WriteFileAtomic(path, SerializeModel(model));
}

ModelFile LoadModel(const std::filesystem::path& path) {
  try {
    return ParseModel(ReadFile(path));
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

}  // namespace herald

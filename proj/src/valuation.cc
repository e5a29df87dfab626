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

#include "herald/valuation.h"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <thread>
#include <utility>

#include "herald/error.h"

namespace herald {
namespace {

// Dev points valued per parallel round. Each round holds kDevBatch score
// vectors in memory before they are folded into the total in dev order.
constexpr std::size_t kDevBatch = 32;

void CheckShapes(const FeatureMatrix& train, std::span<const Label> train_labels,
                 const FeatureMatrix& dev, std::span<const Label> dev_labels,
                 int k) {
  if (k < 1) throw InvalidArgument("k must be >= 1");
  if (train.empty()) throw InvalidArgument("empty training set");
  if (dev.empty()) throw InvalidArgument("empty dev set");
  if (train_labels.size() != train.rows()) {
    throw InvalidArgument("training labels do not match training rows");
  }
  if (dev_labels.size() != dev.rows()) {
    throw InvalidArgument("dev labels do not match dev rows");
  }
  if (train.dim() != dev.dim()) {
    throw InvalidArgument("dimension mismatch: train dim " +
                          std::to_string(train.dim()) + ", dev dim " +
                          std::to_string(dev.dim()));
  }
}

// Writes single-dev values into `out` (size N).
void SingleDevInto(const NeighborOrdering& ordering,
                   std::span<const Label> train_labels, Label target, int k,
                   std::span<double> out) {
  const std::size_t n = ordering.order.size();
  const double kk = static_cast<double>(k);
  auto match = [&](std::size_t pos) {
    return train_labels[ordering.order[pos]] == target ? 1.0 : 0.0;
  };
  // Positions are 0-based here; rank i = pos + 1.
  const double last_rank = static_cast<double>(n);
  double value = std::min(kk, last_rank) / (last_rank * kk) * match(n - 1);
  out[ordering.order[n - 1]] = value;
  for (std::size_t pos = n - 1; pos-- > 0;) {
    const double rank = static_cast<double>(pos + 1);
    value += std::min(kk, rank) / (rank * kk) * (match(pos) - match(pos + 1));
    out[ordering.order[pos]] = value;
  }
}

}  // namespace

double SquaredDistance(std::span<const float> a, std::span<const float> b) {
  const std::size_t n = a.size();
  double lanes[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (int l = 0; l < 4; ++l) {
      const double d = static_cast<double>(a[i + l]) - static_cast<double>(b[i + l]);
      lanes[l] += d * d;
    }
  }
  for (; i < n; ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    lanes[0] += d * d;
  }
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

NeighborOrdering SortNeighbors(const FeatureMatrix& train,
                               std::span<const float> query) {
  if (train.empty()) throw InvalidArgument("empty training set");
  if (query.size() != train.dim()) {
    throw InvalidArgument("dimension mismatch: train dim " +
                          std::to_string(train.dim()) + ", query dim " +
                          std::to_string(query.size()));
  }
  std::vector<std::pair<double, std::size_t>> keyed(train.rows());
  for (std::size_t i = 0; i < train.rows(); ++i) {
    keyed[i] = {SquaredDistance(train.Row(i), query), i};
  }
  std::sort(keyed.begin(), keyed.end());
  NeighborOrdering ordering;
  ordering.order.reserve(keyed.size());
  ordering.squared_distance.reserve(keyed.size());
  for (const auto& [distance, index] : keyed) {
    ordering.order.push_back(index);
    ordering.squared_distance.push_back(distance);
  }
  return ordering;
}

double KnnUtility(std::span<const Label> labels_in_order, Label target, int k) {
  if (k < 1) throw InvalidArgument("k must be >= 1");
  const std::size_t top = std::min<std::size_t>(k, labels_in_order.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < top; ++i) {
    if (labels_in_order[i] == target) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(k);
}

ShapleyScores ShapleySingleDev(const NeighborOrdering& ordering,
                               std::span<const Label> train_labels,
                               Label target, int k) {
  if (k < 1) throw InvalidArgument("k must be >= 1");
  if (ordering.order.empty()) throw InvalidArgument("empty training set");
  if (ordering.order.size() != train_labels.size()) {
    throw InvalidArgument("ordering does not cover the training set");
  }
  ShapleyScores scores;
  scores.values.assign(train_labels.size(), 0.0);
  scores.k = k;
  scores.dev_count = 1;
  SingleDevInto(ordering, train_labels, target, k, scores.values);
  return scores;
}

ShapleyScores ShapleyMultiDev(const FeatureMatrix& train,
                              std::span<const Label> train_labels,
                              const FeatureMatrix& dev,
                              std::span<const Label> dev_labels,
                              const ValuationConfig& config) {
  CheckShapes(train, train_labels, dev, dev_labels, config.k);
  const std::size_t n = train.rows();
  const std::size_t threads =
      static_cast<std::size_t>(std::max(1, config.threads));

  std::vector<double> total(n, 0.0);
  std::vector<double> batch(kDevBatch * n);
  for (std::size_t begin = 0; begin < dev.rows(); begin += kDevBatch) {
    const std::size_t end = std::min(dev.rows(), begin + kDevBatch);
    auto value_range = [&](std::size_t worker) {
      for (std::size_t j = begin + worker; j < end; j += threads) {
        const NeighborOrdering ordering = SortNeighbors(train, dev.Row(j));
        SingleDevInto(ordering, train_labels, dev_labels[j], config.k,
                      std::span<double>(batch.data() + (j - begin) * n, n));
      }
    };
    if (threads == 1) {
      value_range(0);
    } else {
      std::vector<std::jthread> workers;
      workers.reserve(threads);
      for (std::size_t t = 0; t < threads; ++t) workers.emplace_back(value_range, t);
    }
    for (std::size_t j = begin; j < end; ++j) {
      const double* row = batch.data() + (j - begin) * n;
      for (std::size_t i = 0; i < n; ++i) total[i] += row[i];
    }
  }

  ShapleyScores scores;
  scores.k = config.k;
  scores.dev_count = dev.rows();
  scores.values = std::move(total);
  const double count = static_cast<double>(dev.rows());
  for (double& v : scores.values) v /= count;
  return scores;
}

ShapleyScores ShapleyBruteForce(const FeatureMatrix& train,
                                std::span<const Label> train_labels,
                                const FeatureMatrix& dev,
                                std::span<const Label> dev_labels, int k) {
  CheckShapes(train, train_labels, dev, dev_labels, k);
  const std::size_t n = train.rows();
  if (n > kBruteForceMaxPoints) {
    throw InvalidArgument("brute-force Shapley supports at most " +
                          std::to_string(kBruteForceMaxPoints) +
                          " training points, got " + std::to_string(n));
  }
  const std::size_t subsets = std::size_t{1} << n;

  // Utility of every coalition, averaged over dev points.
  std::vector<double> utility(subsets, 0.0);
  for (std::size_t j = 0; j < dev.rows(); ++j) {
    std::vector<double> distance(n);
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0;
      for (std::size_t d = 0; d < train.dim(); ++d) {
        const double diff = static_cast<double>(train.Row(i)[d]) -
                            static_cast<double>(dev.Row(j)[d]);
        sum += diff * diff;
      }
      distance[i] = sum;
    }
    std::vector<std::size_t> by_distance(n);
    std::iota(by_distance.begin(), by_distance.end(), 0);
    std::stable_sort(by_distance.begin(), by_distance.end(),
                     [&](std::size_t a, std::size_t b) {
                       return distance[a] < distance[b];
                     });
    for (std::size_t mask = 0; mask < subsets; ++mask) {
      std::vector<Label> members;
      for (std::size_t idx : by_distance) {
        if (mask & (std::size_t{1} << idx)) members.push_back(train_labels[idx]);
      }
      std::size_t hits = 0;
      const std::size_t top = std::min<std::size_t>(k, members.size());
      for (std::size_t m = 0; m < top; ++m) hits += members[m] == dev_labels[j];
      utility[mask] += static_cast<double>(hits) / static_cast<double>(k);
    }
  }
  for (double& u : utility) u /= static_cast<double>(dev.rows());

  // weight(s) = 1 / (N * C(N-1, s)).
  std::vector<double> weight(n);
  for (std::size_t s = 0; s < n; ++s) {
    double binom = 1.0;
    for (std::size_t t = 1; t <= s; ++t) {
      binom = binom * static_cast<double>(n - 1 - s + t) / static_cast<double>(t);
    }
    weight[s] = 1.0 / (static_cast<double>(n) * binom);
  }

  ShapleyScores scores;
  scores.values.assign(n, 0.0);
  scores.k = k;
  scores.dev_count = dev.rows();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t bit = std::size_t{1} << i;
    double value = 0.0;
    for (std::size_t mask = 0; mask < subsets; ++mask) {
      if (mask & bit) continue;
      const auto size = static_cast<std::size_t>(std::popcount(mask));
      value += weight[size] * (utility[mask | bit] - utility[mask]);
    }
    scores.values[i] = value;
  }
  return scores;
}

double FullUtility(const FeatureMatrix& train,
                   std::span<const Label> train_labels, const FeatureMatrix& dev,
                   std::span<const Label> dev_labels, int k) {
  CheckShapes(train, train_labels, dev, dev_labels, k);
  double total = 0.0;
  for (std::size_t j = 0; j < dev.rows(); ++j) {
    const NeighborOrdering ordering = SortNeighbors(train, dev.Row(j));
    std::vector<Label> ordered;
    ordered.reserve(ordering.order.size());
    for (std::size_t idx : ordering.order) ordered.push_back(train_labels[idx]);
    total += KnnUtility(ordered, dev_labels[j], k);
  }
  return total / static_cast<double>(dev.rows());
}

}  // namespace herald

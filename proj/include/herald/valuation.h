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

// Exact Shapley values of training points for a K-nearest-neighbor
// classifier evaluated on a labeled dev set.
//
// The game: players are training points; the utility of a subset S for one
// dev point (x, y) is the KNN likelihood of the correct label,
//
//   v(S) = (1/K) * sum_{k=1}^{min(K,|S|)} [label of k-th nearest in S == y],
//
// and for several dev points the mean of the per-point utilities. With the
// training points sorted by distance to x (a_1 nearest ... a_N farthest),
// the Shapley values satisfy
//
//   s(a_N) = min(K,N) / (N*K) * [y(a_N) == y]
//   s(a_i) = s(a_{i+1}) + min(K,i) / (i*K) * ([y(a_i) == y] - [y(a_{i+1}) == y])
//
// so one sort per dev point gives all N values. Distance ties are broken by
// ascending training index, both here and in the utility itself.

#ifndef HERALD_VALUATION_H_
#define HERALD_VALUATION_H_

#include <cstddef>
#include <span>
#include <vector>

#include "herald/corpus.h"
#include "herald/embedding.h"

namespace herald {

// Training indices by ascending (squared distance, index).
struct NeighborOrdering {
  std::vector<std::size_t> order;
  std::vector<double> squared_distance;  // Aligned with `order`.
};

// Squared Euclidean distance accumulated in double with a fixed summation
// order, so equal inputs give bit-equal results everywhere.
double SquaredDistance(std::span<const float> a, std::span<const float> b);

// Throws InvalidArgument on an empty training set or dimension mismatch.
NeighborOrdering SortNeighbors(const FeatureMatrix& train,
                               std::span<const float> query);

// v(S) for labels given in S's own distance order. v(empty) = 0.
double KnnUtility(std::span<const Label> labels_in_order, Label target, int k);

struct ShapleyScores {
  std::vector<double> values;  // Indexed like the training set.
  int k = 0;
  std::size_t dev_count = 0;
};

ShapleyScores ShapleySingleDev(const NeighborOrdering& ordering,
                               std::span<const Label> train_labels,
                               Label target, int k);

struct ValuationConfig {
  int k = 10;
  // Dev points are valued concurrently; the reduction order is fixed, so the
  // result does not depend on the thread count.
  int threads = 1;
};

// Mean over dev points of the single-dev values, summed in ascending dev
// index. Throws InvalidArgument on empty train/dev sets or mismatched shapes.
ShapleyScores ShapleyMultiDev(const FeatureMatrix& train,
                              std::span<const Label> train_labels,
                              const FeatureMatrix& dev,
                              std::span<const Label> dev_labels,
                              const ValuationConfig& config);

inline constexpr std::size_t kBruteForceMaxPoints = 12;

// Exhaustive Shapley values from the subset definition, for testing the
// closed form. Enumerates all 2^N coalitions; N must be <= 12.
ShapleyScores ShapleyBruteForce(const FeatureMatrix& train,
                                std::span<const Label> train_labels,
                                const FeatureMatrix& dev,
                                std::span<const Label> dev_labels, int k);

// v(D_train) averaged over the dev set; the sum of all Shapley values.
double FullUtility(const FeatureMatrix& train,
                   std::span<const Label> train_labels, const FeatureMatrix& dev,
                   std::span<const Label> dev_labels, int k);

}  // namespace herald

#endif  // HERALD_VALUATION_H_

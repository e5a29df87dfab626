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


// Binary classification metrics. Label 1 (disengaged) is the positive class.

#ifndef HERALD_METRICS_H_
#define HERALD_METRICS_H_

#include <cstddef>
#include <span>

#include "herald/corpus.h"

namespace herald {

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  bool operator==(const Confusion&) const = default;
};

// Throws InvalidArgument when the sequences differ in length.
Confusion Tally(std::span<const Label> predictions, std::span<const Label> golds);

// (sensitivity + specificity) / 2. Throws InvalidArgument unless the golds
// contain both classes.
double BalancedAccuracy(const Confusion& confusion);

// Mean recall over the gold classes that occur: BalancedAccuracy when both
// occur, else the recall of the one present. Throws on an empty confusion.
double MeanClassRecall(const Confusion& confusion);

// 0 when undefined.
double Precision(const Confusion& confusion);
double Recall(const Confusion& confusion);

// (1 + b^2) P R / (b^2 P + R), and 0 when P = R = 0. An undefined precision
// (no predicted positives) counts as 0.
double FBeta(const Confusion& confusion, double beta);

double Accuracy(const Confusion& confusion);

struct MetricReport {
  double balanced_accuracy = 0.0;
  double f_beta = 0.0;
  double beta = 2.0;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  Confusion confusion;

  OrderedJson ToJson() const;
};

// With `single_class_ok`, balanced_accuracy falls back to MeanClassRecall
// instead of throwing when the golds hold one class.
MetricReport Evaluate(std::span<const Label> predictions,
                      std::span<const Label> golds, double beta = 2.0,
                      bool single_class_ok = false);

}  // namespace herald

#endif  // HERALD_METRICS_H_

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


#include "herald/metrics.h"

#include "herald/error.h"

namespace herald {

Confusion Tally(std::span<const Label> predictions, std::span<const Label> golds) {
  if (predictions.size() != golds.size()) {
    throw InvalidArgument("got " + std::to_string(predictions.size()) +
                          " predictions for " + std::to_string(golds.size()) +
                          " gold labels");
  }
  Confusion c;
  for (std::size_t i = 0; i < golds.size(); ++i) {
    const bool pred = predictions[i] == Label::kDisengaged;
    const bool gold = golds[i] == Label::kDisengaged;
    if (pred && gold) ++c.tp;
    else if (pred) ++c.fp;
    else if (gold) ++c.fn;
    else ++c.tn;
  }
  return c;
}

double BalancedAccuracy(const Confusion& c) {
  const std::size_t positives = c.tp + c.fn;
  const std::size_t negatives = c.tn + c.fp;
  if (positives == 0 || negatives == 0) {
    throw InvalidArgument(
        "balanced accuracy needs both classes among the gold labels");
  }
  const double sensitivity =
      static_cast<double>(c.tp) / static_cast<double>(positives);
  const double specificity =
      static_cast<double>(c.tn) / static_cast<double>(negatives);
  return (sensitivity + specificity) / 2.0;
}

double MeanClassRecall(const Confusion& c) {
  const std::size_t positives = c.tp + c.fn;
  const std::size_t negatives = c.tn + c.fp;
  if (positives == 0 && negatives == 0) {
    throw InvalidArgument("no gold labels to score");
  }
  if (positives == 0) {
    return static_cast<double>(c.tn) / static_cast<double>(negatives);
  }
  if (negatives == 0) {
    return static_cast<double>(c.tp) / static_cast<double>(positives);
  }
  return BalancedAccuracy(c);
}

double Precision(const Confusion& c) {
  return c.tp + c.fp == 0
             ? 0.0
             : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
}

double Recall(const Confusion& c) {
  return c.tp + c.fn == 0
             ? 0.0
             : static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

double FBeta(const Confusion& c, double beta) {
  const double precision = Precision(c);
  const double recall = Recall(c);
  if (precision == 0.0 && recall == 0.0) return 0.0;
  const double b2 = beta * beta;
  return (1.0 + b2) * precision * recall / (b2 * precision + recall);
}

double Accuracy(const Confusion& c) {
  if (c.total() == 0) return 0.0;
  return static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
}

OrderedJson MetricReport::ToJson() const {
  OrderedJson out;
  out["balanced_accuracy"] = balanced_accuracy;
  out["f_beta"] = f_beta;
  out["beta"] = beta;
  out["accuracy"] = accuracy;
  out["precision"] = precision;
  out["recall"] = recall;
  out["confusion"] = {{"tp", confusion.tp},
                      {"fp", confusion.fp},
                      {"tn", confusion.tn},
                      {"fn", confusion.fn}};
  return out;
}

MetricReport Evaluate(std::span<const Label> predictions,
                      std::span<const Label> golds, double beta,
                      bool single_class_ok) {
  MetricReport report;
  report.confusion = Tally(predictions, golds);
  report.balanced_accuracy = single_class_ok ? MeanClassRecall(report.confusion)
                                             : BalancedAccuracy(report.confusion);
  report.precision = Precision(report.confusion);
  report.recall = Recall(report.confusion);
  report.f_beta = FBeta(report.confusion, beta);
  report.beta = beta;
  report.accuracy = Accuracy(report.confusion);
  return report;
}

}  // namespace herald

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


// Data-removal curves and heuristic ablations.

#ifndef HERALD_EXPERIMENTS_H_
#define HERALD_EXPERIMENTS_H_

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "herald/corpus.h"
#include "herald/embedding.h"
#include "herald/heuristics.h"
#include "herald/metrics.h"
#include "herald/model.h"

namespace herald {

// kHighFirst removes the most valuable points first, retaining the hurtful.
enum class RemovalStrategy { kLowFirst, kHighFirst, kRandom };

std::string_view ToString(RemovalStrategy strategy);
// Accepts low_first, high_first (or retain_hurtful) and random.
RemovalStrategy ParseRemovalStrategy(std::string_view text);

struct CurvePoint {
  std::size_t removed = 0;
  double balanced_accuracy = 0.0;
  double accuracy = 0.0;
};

struct RemovalCurve {
  RemovalStrategy strategy = RemovalStrategy::kLowFirst;
  std::vector<CurvePoint> points;
};

struct CurveConfig {
  int k = 10;
  std::size_t step = 1;
  // Points removed at the last curve point; 0 means all but one.
  std::size_t max_removed = 0;
  std::uint64_t seed = 0;
  // Refit a linear head on the (up-sampled) remaining points instead of the
  // KNN vote at each curve point.
  bool refit_head = false;
  TrainConfig train;
};

// Order in which training points are removed. Ties in value keep index
// order; kRandom is a seeded shuffle.
std::vector<std::size_t> RemovalOrder(std::span<const double> scores,
                                      RemovalStrategy strategy,
                                      std::uint64_t seed);

// Evaluates the classifier refit on the points that remain after removing
// 0, step, 2*step, ... points in RemovalOrder, up to max_removed. Throws
// InvalidArgument when step is 0 or exceeds the dataset.
RemovalCurve ComputeRemovalCurve(const FeatureMatrix& train,
                                 std::span<const Label> train_labels,
                                 std::span<const double> scores,
                                 const FeatureMatrix& eval,
                                 std::span<const Label> eval_labels,
                                 RemovalStrategy strategy,
                                 const CurveConfig& config);

// "removed,metric" CSV with one row per curve point.
std::string CurveCsv(const RemovalCurve& curve, bool accuracy = false);

struct AblationToggle {
  std::string name;
  std::set<int> groups = {1, 2, 3, 4};
  bool use_regex = true;
  bool use_dialog_acts = true;
};

// all, regex_only, nlu_only, without_group_1 .. without_group_4.
std::vector<AblationToggle> StandardAblations();

struct AblationRow {
  AblationToggle toggle;
  MetricReport report;
  std::size_t disengaged = 0;
};

// Heuristics used directly as the predictor on a gold-labeled corpus. A
// corpus with one gold class is scored by that class's recall.
std::vector<AblationRow> RunAblation(const Corpus& corpus, const RuleSet& rules,
                                     std::span<const AblationToggle> toggles,
                                     double beta = 2.0);

OrderedJson AblationJson(std::span<const AblationRow> rows);

}  // namespace herald

#endif  // HERALD_EXPERIMENTS_H_

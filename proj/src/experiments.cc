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


#include "herald/experiments.h"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "herald/denoiser.h"
#include "herald/error.h"
#include "herald/rng.h"
#include "herald/valuation.h"

namespace herald {
namespace {

std::vector<Label> GoldLabels(const Corpus& corpus) {
  std::vector<Label> golds;
  for (const Dialog& dialog : corpus.dialogs) {
    for (const Turn& turn : dialog.turns) {
      if (!turn.gold_label) {
        throw DataError("missing gold label at " +
                        TurnKey{dialog.dialog_id, turn.index}.ToString());
      }
      golds.push_back(*turn.gold_label);
    }
  }
  return golds;
}

std::vector<Label> KnnPredictions(const std::vector<NeighborOrdering>& orderings,
                                  std::span<const Label> train_labels,
                                  const std::vector<char>& removed, int k) {
  std::vector<Label> predictions;
  predictions.reserve(orderings.size());
  std::vector<Label> nearest;
  for (const NeighborOrdering& ordering : orderings) {
    nearest.clear();
    for (std::size_t idx : ordering.order) {
      if (removed[idx]) continue;
      nearest.push_back(train_labels[idx]);
      if (nearest.size() == static_cast<std::size_t>(k)) break;
    }
    predictions.push_back(KnnVote(nearest, k).label);
  }
  return predictions;
}

std::vector<Label> HeadPredictions(const FeatureMatrix& train,
                                   std::span<const Label> train_labels,
                                   const std::vector<char>& removed,
                                   const FeatureMatrix& eval,
                                   const TrainConfig& config) {
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < train.rows(); ++i) {
    if (!removed[i]) kept.push_back(i);
  }
  std::vector<Label> kept_labels;
  for (std::size_t i : kept) kept_labels.push_back(train_labels[i]);
  std::vector<std::size_t> rows;
  std::vector<Label> labels;
  for (std::size_t j : UpsampleIndices(kept_labels)) {
    rows.push_back(kept[j]);
    labels.push_back(kept_labels[j]);
  }
  const TrainResult fit = TrainLinearHead(train.Gather(rows), labels, config);
  std::vector<Label> predictions;
  for (std::size_t i = 0; i < eval.rows(); ++i) {
    predictions.push_back(DecideLinear(fit.head, eval.Row(i)));
  }
  return predictions;
}

}  // namespace

std::string_view ToString(RemovalStrategy strategy) {
  switch (strategy) {
    case RemovalStrategy::kLowFirst:
      return "low_first";
    case RemovalStrategy::kHighFirst:
      return "high_first";
    case RemovalStrategy::kRandom:
      return "random";
  }
  return "low_first";
}

RemovalStrategy ParseRemovalStrategy(std::string_view text) {
  if (text == "low_first") return RemovalStrategy::kLowFirst;
  if (text == "high_first" || text == "retain_hurtful") {
    return RemovalStrategy::kHighFirst;
  }
  if (text == "random") return RemovalStrategy::kRandom;
  throw ConfigError("unknown removal strategy \"" + std::string(text) +
                    "\" (expected low_first, high_first or random)");
}

std::vector<std::size_t> RemovalOrder(std::span<const double> scores,
                                      RemovalStrategy strategy,
                                      std::uint64_t seed) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  switch (strategy) {
    case RemovalStrategy::kLowFirst:
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
      break;
    case RemovalStrategy::kHighFirst:
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
      break;
    case RemovalStrategy::kRandom: {
      Rng rng(seed);
      rng.Shuffle(std::span<std::size_t>(order));
      break;
    }
  }
  return order;
}

RemovalCurve ComputeRemovalCurve(const FeatureMatrix& train,
                                 std::span<const Label> train_labels,
                                 std::span<const double> scores,
                                 const FeatureMatrix& eval,
                                 std::span<const Label> eval_labels,
                                 RemovalStrategy strategy,
                                 const CurveConfig& config) {
  const std::size_t n = train.rows();
  if (n == 0) throw InvalidArgument("empty training set");
  if (train_labels.size() != n || scores.size() != n) {
    throw InvalidArgument("labels and scores must align with training rows");
  }
  if (eval_labels.size() != eval.rows()) {
    throw InvalidArgument("eval labels do not match eval rows");
  }
  if (config.step == 0) throw InvalidArgument("curve step must be positive");
  if (config.step > n) {
    throw InvalidArgument("curve step " + std::to_string(config.step) +
                          " exceeds the dataset size " + std::to_string(n));
  }
  const std::size_t max_removed =
      config.max_removed == 0 ? n - 1 : std::min(config.max_removed, n - 1);

  std::vector<NeighborOrdering> orderings;
  if (!config.refit_head) {
    orderings.reserve(eval.rows());
    for (std::size_t j = 0; j < eval.rows(); ++j) {
      orderings.push_back(SortNeighbors(train, eval.Row(j)));
    }
  }

  const std::vector<std::size_t> order = RemovalOrder(scores, strategy, config.seed);
  std::vector<char> removed(n, 0);
  RemovalCurve curve;
  curve.strategy = strategy;
  std::size_t count = 0;
  while (true) {
    const std::vector<Label> predictions =
        config.refit_head
            ? HeadPredictions(train, train_labels, removed, eval, config.train)
            : KnnPredictions(orderings, train_labels, removed, config.k);
    const Confusion confusion = Tally(predictions, eval_labels);
    curve.points.push_back(
        {count, BalancedAccuracy(confusion), Accuracy(confusion)});
    if (count + config.step > max_removed) break;
    for (std::size_t r = count; r < count + config.step; ++r) removed[order[r]] = 1;
    count += config.step;
  }
  return curve;
}

std::string CurveCsv(const RemovalCurve& curve, bool accuracy) {
  std::ostringstream out;
  out.precision(17);
  out << "removed,metric\n";
  for (const CurvePoint& point : curve.points) {
    out << point.removed << ','
        << (accuracy ? point.accuracy : point.balanced_accuracy) << '\n';
  }
  return out.str();
}

std::vector<AblationToggle> StandardAblations() {
  std::vector<AblationToggle> toggles;
  toggles.push_back({"all", {1, 2, 3, 4}, true, true});
  toggles.push_back({"regex_only", {1, 2, 3, 4}, true, false});
  toggles.push_back({"nlu_only", {1, 2, 3, 4}, false, true});
  for (int g = 1; g <= kNumGroups; ++g) {
    std::set<int> groups = {1, 2, 3, 4};
    groups.erase(g);
    toggles.push_back({"without_group_" + std::to_string(g), groups, true, true});
  }
  return toggles;
}

std::vector<AblationRow> RunAblation(const Corpus& corpus, const RuleSet& rules,
                                     std::span<const AblationToggle> toggles,
                                     double beta) {
  const std::vector<Label> golds = GoldLabels(corpus);
  std::vector<AblationRow> rows;
  for (const AblationToggle& toggle : toggles) {
    RuleSet variant = rules;
    variant.enabled_groups = toggle.groups;
    variant.use_regex = toggle.use_regex;
    variant.use_dialog_acts = toggle.use_dialog_acts;
    std::vector<Label> predictions;
    std::size_t disengaged = 0;
    for (const Dialog& dialog : corpus.dialogs) {
      for (const Turn& turn : dialog.turns) {
        const Label label = LabelTurn(turn, variant, dialog.source_mode).label;
        disengaged += label == Label::kDisengaged;
        predictions.push_back(label);
      }
    }
    rows.push_back({toggle, Evaluate(predictions, golds, beta, true), disengaged});
  }
  return rows;
}

OrderedJson AblationJson(std::span<const AblationRow> rows) {
  OrderedJson out = OrderedJson::array();
  for (const AblationRow& row : rows) {
    OrderedJson entry;
    entry["name"] = row.toggle.name;
    entry["groups"] = row.toggle.groups;
    entry["regex"] = row.toggle.use_regex;
    entry["dialog_acts"] = row.toggle.use_dialog_acts;
    entry["disengaged"] = row.disengaged;
    entry["report"] = row.report.ToJson();
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace herald

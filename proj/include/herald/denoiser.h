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


// Duplicate-and-flip label denoising.
//
// Every weakly labeled turn is entered once per candidate label, all copies
// are valued against the dev set, copies with negative value are dropped,
// and the surviving copies of each turn are reconciled into at most one
// clean label. A turn whose only surviving copy carries the other label has
// effectively been relabeled.

#ifndef HERALD_DENOISER_H_
#define HERALD_DENOISER_H_

#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "herald/corpus.h"

namespace herald {

enum class Origin { kOriginal, kFlipped };

struct DuplicatedEntry {
  TurnKey key;
  Label label = Label::kEngaged;
  Origin origin = Origin::kOriginal;

  bool operator==(const DuplicatedEntry&) const = default;
};

using DuplicatedDataset = std::vector<DuplicatedEntry>;

// Two entries per key, in key order; for each key the label-0 copy comes
// first, then the label-1 copy.
DuplicatedDataset DuplicateAllLabels(const WeakLabelMap& weak);

enum class ConflictPolicy { kKeepHigher, kKeepOriginal, kKeepBoth };

std::string_view ToString(ConflictPolicy policy);
// Throws ConfigError for unknown names.
ConflictPolicy ParseConflictPolicy(std::string_view text);

struct DenoiseConfig {
  ConflictPolicy policy = ConflictPolicy::kKeepHigher;
  // Balance the dev set before valuation and the clean set before training.
  bool upsample_dev = true;
  bool upsample_clean = true;
  double upsample_ratio = 1.0;
};

struct CleanEntry {
  TurnKey key;
  Label label = Label::kEngaged;
  double shapley = 0.0;
  // True when `label` differs from the weak label.
  bool flipped = false;

  bool operator==(const CleanEntry&) const = default;
};

using CleanDataset = std::vector<CleanEntry>;

// Drops copies with value < 0 and resolves keys where both copies survive:
// kKeepHigher keeps the larger value (ties keep the weak label),
// kKeepOriginal keeps the weak label, kKeepBoth keeps both copies. Output is
// in duplicated-dataset order. Throws InvalidArgument when the scores are
// not aligned with the entries.
CleanDataset Denoise(const DuplicatedDataset& duplicated,
                     std::span<const double> scores,
                     const DenoiseConfig& config);

// Indices realizing minority up-sampling: every original index in order,
// then minority indices cycled in order until minority/majority reaches
// `target_ratio`. Single-class input yields the identity (with a warning).
std::vector<std::size_t> UpsampleIndices(std::span<const Label> labels,
                                         double target_ratio = 1.0);

template <typename T, typename LabelOf>
std::vector<T> UpsampleMinority(const std::vector<T>& items, LabelOf label_of,
                                double target_ratio = 1.0) {
  std::vector<Label> labels;
  labels.reserve(items.size());
  for (const T& item : items) labels.push_back(label_of(item));
  std::vector<T> out;
  for (std::size_t i : UpsampleIndices(labels, target_ratio)) {
    out.push_back(items[i]);
  }
  return out;
}

// Scores JSONL: {"key": "d001#3", "label": 1, "shapley": -0.0123}.
struct ScoreRecord {
  TurnKey key;
  Label label = Label::kEngaged;
  double shapley = 0.0;

  bool operator==(const ScoreRecord&) const = default;
};

void WriteScores(std::span<const ScoreRecord> records, std::ostream& out);
std::vector<ScoreRecord> ParseScores(std::istream& in);

// Orders `records` like `duplicated`, matching on (key, label). Throws
// DataError on a missing, duplicate, or extra record.
std::vector<double> AlignScores(const DuplicatedDataset& duplicated,
                                std::span<const ScoreRecord> records);

// Clean JSONL: {"key", "label", "shapley", "flipped"}.
void WriteClean(const CleanDataset& clean, std::ostream& out);
CleanDataset ParseClean(std::istream& in);

}  // namespace herald

#endif  // HERALD_DENOISER_H_

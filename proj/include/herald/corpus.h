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

// Dialog corpora, turn identity, and weak-label files.
//
// A corpus file is JSONL with one dialog per line:
//
//   {"dialog_id": "d001", "source_mode": "asr", "turns": [
//      {"index": 0, "system": "...", "user": "...",
//       "dialog_acts": ["neg_answer"], "gold_label": 1}]}
//
// Fields this library does not know about are carried through unchanged so a
// parse/serialize cycle never loses information.

#ifndef HERALD_CORPUS_H_
#define HERALD_CORPUS_H_

#include <compare>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nlohmann/json.hpp"

namespace herald {

using OrderedJson = nlohmann::ordered_json;

enum class Label : std::uint8_t { kEngaged = 0, kDisengaged = 1 };

inline int ToInt(Label label) { return static_cast<int>(label); }
inline Label Flip(Label label) {
  return label == Label::kEngaged ? Label::kDisengaged : Label::kEngaged;
}
// Throws DataError for anything other than 0 or 1.
Label LabelFromInt(std::int64_t value);

enum class SourceMode { kText, kAsr };
enum class CorpusRole { kTrain, kDev, kTest };

std::string_view ToString(SourceMode mode);
std::string_view ToString(CorpusRole role);
SourceMode ParseSourceMode(std::string_view text);
CorpusRole ParseCorpusRole(std::string_view text);

// Dialog-act tags attached to a user utterance. Tags are either turn-level
// (a flat JSON list) or given per user segment (a list of lists).
struct DialogActs {
  bool per_segment = false;
  // One inner list when turn-level; one per segment otherwise.
  std::vector<std::vector<std::string>> tags;

  bool operator==(const DialogActs&) const = default;
};

struct Turn {
  int index = 0;
  std::string system_utterance;
  std::string user_utterance;
  std::optional<DialogActs> dialog_acts;
  std::optional<Label> gold_label;
  OrderedJson extra = OrderedJson::object();

  bool operator==(const Turn&) const = default;
};

struct Dialog {
  std::string dialog_id;
  SourceMode source_mode = SourceMode::kText;
  std::vector<Turn> turns;
  OrderedJson extra = OrderedJson::object();

  bool operator==(const Dialog&) const = default;
};

struct Corpus {
  std::vector<Dialog> dialogs;
  CorpusRole role = CorpusRole::kTrain;

  std::size_t turn_count() const;
  bool operator==(const Corpus&) const = default;
};

// Positional turn identity, rendered "dialog_id#turn_index".
struct TurnKey {
  std::string dialog_id;
  int turn_index = 0;

  std::string ToString() const;
  // Splits on the last '#'. Throws DataError on malformed input.
  static TurnKey Parse(std::string_view text);

  auto operator<=>(const TurnKey&) const = default;
};

// Stage-1 output for one turn.
struct WeakLabel {
  Label label = Label::kEngaged;
  std::vector<std::string> matched_intents;
  std::optional<int> matched_group;

  bool operator==(const WeakLabel&) const = default;
};

// Ordered by (dialog_id, turn_index), which is also the file order.
using WeakLabelMap = std::map<TurnKey, WeakLabel>;

// Parses corpus JSONL. Errors carry the 1-based line number. Role
// constraints (gold labels on dev/test) are enforced here and nowhere later.
Corpus ParseCorpus(std::istream& in, CorpusRole role);
Corpus ReadCorpusFile(const std::filesystem::path& path, CorpusRole role);

void WriteCorpus(const Corpus& corpus, std::ostream& out);
std::string SerializeCorpus(const Corpus& corpus);

// Utterances of the turn at `turn_index` preceded by up to `depth` earlier
// turns, chronologically: [system_{i-d}, user_{i-d}, ..., system_i, user_i].
std::vector<std::string> ContextWindow(const Dialog& dialog, int turn_index,
                                       int depth);

// One JSON line per key, in key order. Every key must resolve in `corpus`.
void SerializeLabels(const WeakLabelMap& labels, const Corpus& corpus,
                     std::ostream& out);
WeakLabelMap ParseLabels(std::istream& in);

// Lookup from TurnKey to the turn it names.
class CorpusIndex {
 public:
  explicit CorpusIndex(const Corpus& corpus);

  bool Contains(const TurnKey& key) const;
  // Throws DataError naming the key when it does not resolve.
  const Turn& Resolve(const TurnKey& key) const;
  const Dialog& DialogOf(const TurnKey& key) const;
  // All keys in corpus order.
  std::vector<TurnKey> Keys() const;

 private:
  const Corpus* corpus_;
  std::unordered_map<std::string, std::size_t> dialog_position_;
};

}  // namespace herald

#endif  // HERALD_CORPUS_H_

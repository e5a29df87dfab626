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

#include "herald/corpus.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "herald/error.h"

namespace herald {
namespace {

std::string AtLine(std::size_t line_number) {
  return "line " + std::to_string(line_number) + ": ";
}

bool HasNonSpace(std::string_view text) {
  return std::any_of(text.begin(), text.end(), [](unsigned char c) {
    return !(c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
             c == '\v');
  });
}

const OrderedJson& RequireField(const OrderedJson& object,
                                const std::string& name,
                                const std::string& where) {
  auto it = object.find(name);
  if (it == object.end()) {
    throw DataError(where + "missing field \"" + name + "\"");
  }
  return *it;
}

std::string RequireString(const OrderedJson& value, const std::string& name,
                          const std::string& where) {
  if (!value.is_string()) {
    throw DataError(where + "field \"" + name + "\" must be a string");
  }
  return value.get<std::string>();
}

DialogActs ParseDialogActs(const OrderedJson& value, const std::string& where) {
  if (!value.is_array()) {
    throw DataError(where + "\"dialog_acts\" must be an array");
  }
  DialogActs acts;
  const bool nested =
      !value.empty() && std::all_of(value.begin(), value.end(),
                                    [](const auto& v) { return v.is_array(); });
  acts.per_segment = nested;
  auto parse_list = [&](const OrderedJson& list) {
    std::vector<std::string> tags;
    for (const auto& tag : list) {
      if (!tag.is_string()) {
        throw DataError(where + "dialog-act tags must be strings");
      }
      tags.push_back(tag.get<std::string>());
    }
    return tags;
  };
  if (nested) {
    for (const auto& list : value) acts.tags.push_back(parse_list(list));
  } else {
    acts.tags.push_back(parse_list(value));
  }
  return acts;
}

OrderedJson DialogActsToJson(const DialogActs& acts) {
  if (acts.per_segment) return OrderedJson(acts.tags);
  return acts.tags.empty() ? OrderedJson::array() : OrderedJson(acts.tags[0]);
}

Turn ParseTurn(const OrderedJson& object, const std::string& where) {
  if (!object.is_object()) {
    throw DataError(where + "each turn must be a JSON object");
  }
  Turn turn;
  for (const auto& [name, value] : object.items()) {
    if (name == "index") {
      if (!value.is_number_integer() || value.get<std::int64_t>() < 0) {
        throw DataError(where + "turn \"index\" must be a non-negative integer");
      }
      turn.index = value.get<int>();
    } else if (name == "system") {
      turn.system_utterance = RequireString(value, name, where);
    } else if (name == "user") {
      turn.user_utterance = RequireString(value, name, where);
    } else if (name == "dialog_acts") {
      turn.dialog_acts = ParseDialogActs(value, where);
    } else if (name == "gold_label") {
      if (value.is_null()) continue;
      if (!value.is_number_integer()) {
        throw DataError(where + "\"gold_label\" must be 0 or 1");
      }
      try {
        turn.gold_label = LabelFromInt(value.get<std::int64_t>());
      } catch (const Error& e) {
        throw DataError(where + e.what());
      }
    } else {
      turn.extra[name] = value;
    }
  }
  RequireField(object, "index", where);
  RequireField(object, "user", where);
  return turn;
}

OrderedJson TurnToJson(const Turn& turn) {
  OrderedJson object = OrderedJson::object();
  object["index"] = turn.index;
  object["system"] = turn.system_utterance;
  object["user"] = turn.user_utterance;
  if (turn.dialog_acts) object["dialog_acts"] = DialogActsToJson(*turn.dialog_acts);
  if (turn.gold_label) object["gold_label"] = ToInt(*turn.gold_label);
  for (const auto& [name, value] : turn.extra.items()) object[name] = value;
  return object;
}

OrderedJson DialogToJson(const Dialog& dialog) {
  OrderedJson object = OrderedJson::object();
  object["dialog_id"] = dialog.dialog_id;
  object["source_mode"] = std::string(ToString(dialog.source_mode));
  OrderedJson turns = OrderedJson::array();
  for (const Turn& turn : dialog.turns) turns.push_back(TurnToJson(turn));
  object["turns"] = std::move(turns);
  for (const auto& [name, value] : dialog.extra.items()) object[name] = value;
  return object;
}

}  // namespace

Label LabelFromInt(std::int64_t value) {
  if (value == 0) return Label::kEngaged;
  if (value == 1) return Label::kDisengaged;
  throw DataError("label must be 0 or 1, got " + std::to_string(value));
}

std::string_view ToString(SourceMode mode) {
  return mode == SourceMode::kAsr ? "asr" : "text";
}

std::string_view ToString(CorpusRole role) {
  switch (role) {
    case CorpusRole::kTrain:
      return "train";
    case CorpusRole::kDev:
      return "dev";
    case CorpusRole::kTest:
      return "test";
  }
  return "train";
}

SourceMode ParseSourceMode(std::string_view text) {
  if (text == "text") return SourceMode::kText;
  if (text == "asr") return SourceMode::kAsr;
  throw DataError("source_mode must be \"text\" or \"asr\", got \"" +
                  std::string(text) + "\"");
}

CorpusRole ParseCorpusRole(std::string_view text) {
  if (text == "train") return CorpusRole::kTrain;
  if (text == "dev") return CorpusRole::kDev;
  if (text == "test") return CorpusRole::kTest;
  throw InvalidArgument("unknown corpus role \"" + std::string(text) + "\"");
}

std::size_t Corpus::turn_count() const {
  std::size_t count = 0;
  for (const Dialog& dialog : dialogs) count += dialog.turns.size();
  return count;
}

std::string TurnKey::ToString() const {
  return dialog_id + "#" + std::to_string(turn_index);
}

TurnKey TurnKey::Parse(std::string_view text) {
  const auto hash = text.rfind('#');
  if (hash == std::string_view::npos || hash == 0 || hash + 1 == text.size()) {
    throw DataError("malformed turn key \"" + std::string(text) + "\"");
  }
  const std::string_view digits = text.substr(hash + 1);
  int index = 0;
  const auto [end, ec] =
      std::from_chars(digits.data(), digits.data() + digits.size(), index);
  const bool canonical = digits.size() == 1 || digits[0] != '0';
  if (ec != std::errc() || end != digits.data() + digits.size() || index < 0 ||
      !canonical) {
    throw DataError("malformed turn index in key \"" + std::string(text) + "\"");
  }
  return TurnKey{std::string(text.substr(0, hash)), index};
}

Corpus ParseCorpus(std::istream& in, CorpusRole role) {
  Corpus corpus;
  corpus.role = role;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!HasNonSpace(line)) continue;
    const std::string where = AtLine(line_number);
    OrderedJson record;
    try {
      record = OrderedJson::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError(where + "malformed JSON: " + e.what());
    }
    if (!record.is_object()) {
      throw DataError(where + "dialog record must be a JSON object");
    }

    Dialog dialog;
    for (const auto& [name, value] : record.items()) {
      if (name == "dialog_id") {
        dialog.dialog_id = RequireString(value, name, where);
      } else if (name == "source_mode") {
        try {
          dialog.source_mode =
              ParseSourceMode(RequireString(value, name, where));
        } catch (const Error& e) {
          throw DataError(where + e.what());
        }
      } else if (name == "turns") {
        if (!value.is_array()) {
          throw DataError(where + "\"turns\" must be an array");
        }
        for (const auto& turn : value) {
          dialog.turns.push_back(ParseTurn(turn, where));
        }
      } else {
        dialog.extra[name] = value;
      }
    }
    RequireField(record, "source_mode", where);
    RequireField(record, "turns", where);
    if (dialog.dialog_id.empty()) {
      throw DataError(where + "\"dialog_id\" must be a non-empty string");
    }
    if (dialog.dialog_id.find('#') != std::string::npos) {
      throw DataError(where + "dialog_id \"" + dialog.dialog_id +
                      "\" must not contain '#'");
    }
    if (!seen_ids.insert(dialog.dialog_id).second) {
      throw DataError(where + "duplicate dialog_id \"" + dialog.dialog_id +
                      "\"");
    }
    if (dialog.turns.empty()) {
      throw DataError(where + "dialog \"" + dialog.dialog_id +
                      "\" has no turns");
    }

    std::stable_sort(dialog.turns.begin(), dialog.turns.end(),
                     [](const Turn& a, const Turn& b) { return a.index < b.index; });
    for (std::size_t i = 0; i < dialog.turns.size(); ++i) {
      const Turn& turn = dialog.turns[i];
      const TurnKey key{dialog.dialog_id, turn.index};
      if (turn.index != static_cast<int>(i)) {
        throw DataError(where + "non-contiguous turn indices in dialog \"" +
                        dialog.dialog_id + "\": expected index " +
                        std::to_string(i) + ", found " +
                        std::to_string(turn.index));
      }
      if (!HasNonSpace(turn.user_utterance)) {
        throw DataError(where + "empty user utterance at " + key.ToString());
      }
      if (role != CorpusRole::kTrain && !turn.gold_label) {
        throw DataError(where + "missing gold label at " + key.ToString());
      }
    }
    corpus.dialogs.push_back(std::move(dialog));
  }
  return corpus;
}

Corpus ReadCorpusFile(const std::filesystem::path& path, CorpusRole role) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus '" + path.string() + "'");
  try {
    return ParseCorpus(in, role);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

void WriteCorpus(const Corpus& corpus, std::ostream& out) {
  for (const Dialog& dialog : corpus.dialogs) {
    out << DialogToJson(dialog).dump() << '\n';
  }
}

std::string SerializeCorpus(const Corpus& corpus) {
  std::ostringstream out;
  WriteCorpus(corpus, out);
  return out.str();
}

std::vector<std::string> ContextWindow(const Dialog& dialog, int turn_index,
                                       int depth) {
  if (turn_index < 0 || turn_index >= static_cast<int>(dialog.turns.size())) {
    throw InvalidArgument("turn index " + std::to_string(turn_index) +
                          " out of range for dialog \"" + dialog.dialog_id +
                          "\" with " + std::to_string(dialog.turns.size()) +
                          " turns");
  }
  if (depth < 0) throw InvalidArgument("context depth must be >= 0");
  const int first = std::max(0, turn_index - depth);
  std::vector<std::string> window;
  window.reserve(2 * static_cast<std::size_t>(turn_index - first + 1));
  for (int i = first; i <= turn_index; ++i) {
    window.push_back(dialog.turns[i].system_utterance);
    window.push_back(dialog.turns[i].user_utterance);
  }
  return window;
}

void SerializeLabels(const WeakLabelMap& labels, const Corpus& corpus,
                     std::ostream& out) {
  const CorpusIndex index(corpus);
  for (const auto& [key, weak] : labels) {
    if (!index.Contains(key)) {
      throw DataError("dangling turn key " + key.ToString());
    }
    OrderedJson row = OrderedJson::object();
    row["key"] = key.ToString();
    row["label"] = ToInt(weak.label);
    row["matched_intents"] = weak.matched_intents;
    row["matched_group"] =
        weak.matched_group ? OrderedJson(*weak.matched_group) : OrderedJson();
    out << row.dump() << '\n';
  }
}

WeakLabelMap ParseLabels(std::istream& in) {
  WeakLabelMap labels;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!HasNonSpace(line)) continue;
    const std::string where = AtLine(line_number);
    try {
      const OrderedJson row = OrderedJson::parse(line);
      WeakLabel weak;
      const TurnKey key = TurnKey::Parse(
          RequireString(RequireField(row, "key", where), "key", where));
      const auto& label = RequireField(row, "label", where);
      if (!label.is_number_integer()) {
        throw DataError(where + "\"label\" must be 0 or 1");
      }
      weak.label = LabelFromInt(label.get<std::int64_t>());
      if (auto it = row.find("matched_intents"); it != row.end()) {
        weak.matched_intents = it->get<std::vector<std::string>>();
      }
      if (auto it = row.find("matched_group"); it != row.end() && !it->is_null()) {
        weak.matched_group = it->get<int>();
      }
      if (!labels.emplace(key, std::move(weak)).second) {
        throw DataError(where + "duplicate key " + key.ToString());
      }
    } catch (const nlohmann::json::exception& e) {
      throw DataError(where + e.what());
    }
  }
  return labels;
}

CorpusIndex::CorpusIndex(const Corpus& corpus) : corpus_(&corpus) {
  for (std::size_t i = 0; i < corpus.dialogs.size(); ++i) {
    dialog_position_.emplace(corpus.dialogs[i].dialog_id, i);
  }
}

bool CorpusIndex::Contains(const TurnKey& key) const {
  auto it = dialog_position_.find(key.dialog_id);
  if (it == dialog_position_.end()) return false;
  return key.turn_index >= 0 &&
         key.turn_index <
             static_cast<int>(corpus_->dialogs[it->second].turns.size());
}

const Dialog& CorpusIndex::DialogOf(const TurnKey& key) const {
  if (!Contains(key)) {
    throw DataError("turn key " + key.ToString() + " does not resolve");
  }
  return corpus_->dialogs[dialog_position_.at(key.dialog_id)];
}

const Turn& CorpusIndex::Resolve(const TurnKey& key) const {
  return DialogOf(key).turns[key.turn_index];
}

std::vector<TurnKey> CorpusIndex::Keys() const {
  std::vector<TurnKey> keys;
  keys.reserve(corpus_->turn_count());
  for (const Dialog& dialog : corpus_->dialogs) {
    for (const Turn& turn : dialog.turns) {
      keys.push_back(TurnKey{dialog.dialog_id, turn.index});
    }
  }
  return keys;
}

}  // namespace herald

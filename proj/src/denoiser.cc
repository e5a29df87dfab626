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


#include "herald/denoiser.h"

#include <algorithm>
#include <map>
#include <string>

#include "herald/error.h"
#include "spdlog/spdlog.h"

namespace herald {
namespace {

template <typename Fn>
void ForEachJsonLine(std::istream& in, Fn fn) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    OrderedJson record;
    try {
      record = OrderedJson::parse(line);
      fn(record);
    } catch (const nlohmann::json::exception& e) {
      throw DataError("line " + std::to_string(number) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(e.kind(), "line " + std::to_string(number) + ": " + e.what());
    }
  }
}

}  // namespace

DuplicatedDataset DuplicateAllLabels(const WeakLabelMap& weak) {
  DuplicatedDataset out;
  out.reserve(2 * weak.size());
  for (const auto& [key, record] : weak) {
    for (Label label : {Label::kEngaged, Label::kDisengaged}) {
      out.push_back({key, label,
                     label == record.label ? Origin::kOriginal : Origin::kFlipped});
    }
  }
  return out;
}

std::string_view ToString(ConflictPolicy policy) {
  switch (policy) {
    case ConflictPolicy::kKeepHigher:
      return "keep_higher";
    case ConflictPolicy::kKeepOriginal:
      return "keep_original";
    case ConflictPolicy::kKeepBoth:
      return "keep_both";
  }
  return "keep_higher";
}

ConflictPolicy ParseConflictPolicy(std::string_view text) {
  if (text == "keep_higher") return ConflictPolicy::kKeepHigher;
  if (text == "keep_original") return ConflictPolicy::kKeepOriginal;
  if (text == "keep_both") return ConflictPolicy::kKeepBoth;
  throw ConfigError("unknown conflict policy \"" + std::string(text) +
                    "\" (expected keep_higher, keep_original or keep_both)");
}

CleanDataset Denoise(const DuplicatedDataset& duplicated,
                     std::span<const double> scores,
                     const DenoiseConfig& config) {
  if (scores.size() != duplicated.size()) {
    throw InvalidArgument("got " + std::to_string(scores.size()) +
                          " scores for " + std::to_string(duplicated.size()) +
                          " duplicated entries");
  }
  // Surviving entry positions per key, in dataset order.
  std::map<TurnKey, std::vector<std::size_t>> survivors;
  std::vector<TurnKey> key_order;
  for (std::size_t i = 0; i < duplicated.size(); ++i) {
    auto [it, inserted] = survivors.try_emplace(duplicated[i].key);
    if (inserted) key_order.push_back(duplicated[i].key);
    if (scores[i] >= 0.0) it->second.push_back(i);
  }

  std::vector<std::size_t> kept;
  for (const TurnKey& key : key_order) {
    const std::vector<std::size_t>& alive = survivors[key];
    if (alive.size() <= 1 || config.policy == ConflictPolicy::kKeepBoth) {
      kept.insert(kept.end(), alive.begin(), alive.end());
      continue;
    }
    std::size_t original = alive.front();
    std::size_t flipped = alive.front();
    for (std::size_t i : alive) {
      if (duplicated[i].origin == Origin::kOriginal) original = i;
      else flipped = i;
    }
    if (config.policy == ConflictPolicy::kKeepHigher &&
        scores[flipped] > scores[original]) {
      kept.push_back(flipped);
    } else {
      kept.push_back(original);
    }
  }
  std::sort(kept.begin(), kept.end());

  CleanDataset clean;
  clean.reserve(kept.size());
  for (std::size_t i : kept) {
    const DuplicatedEntry& entry = duplicated[i];
    clean.push_back({entry.key, entry.label, scores[i],
                     entry.origin == Origin::kFlipped});
  }
  return clean;
}

std::vector<std::size_t> UpsampleIndices(std::span<const Label> labels,
                                         double target_ratio) {
  if (!(target_ratio > 0.0 && target_ratio <= 1.0)) {
    throw InvalidArgument("up-sampling ratio must be in (0, 1]");
  }
  std::vector<std::size_t> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) out[i] = i;
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < labels.size(); ++i) {
    by_class[ToInt(labels[i])].push_back(i);
  }
  if (by_class[0].empty() || by_class[1].empty()) {
    if (!labels.empty()) {
      spdlog::warn("up-sampling skipped: only one class among {} examples",
                   labels.size());
    }
    return out;
  }
  const auto& minority =
      by_class[0].size() < by_class[1].size() ? by_class[0] : by_class[1];
  const std::size_t majority = std::max(by_class[0].size(), by_class[1].size());
  std::size_t count = minority.size();
  for (std::size_t c = 0;
       static_cast<double>(count) < target_ratio * static_cast<double>(majority);
       ++c, ++count) {
    out.push_back(minority[c % minority.size()]);
  }
  return out;
}

void WriteScores(std::span<const ScoreRecord> records, std::ostream& out) {
  for (const ScoreRecord& record : records) {
    OrderedJson line;
    line["key"] = record.key.ToString();
    line["label"] = ToInt(record.label);
    line["shapley"] = record.shapley;
    out << line.dump() << '\n';
  }
}

std::vector<ScoreRecord> ParseScores(std::istream& in) {
  std::vector<ScoreRecord> records;
  ForEachJsonLine(in, [&](const OrderedJson& line) {
    records.push_back({TurnKey::Parse(line.at("key").get<std::string>()),
                       LabelFromInt(line.at("label").get<std::int64_t>()),
                       line.at("shapley").get<double>()});
  });
  return records;
}

std::vector<double> AlignScores(const DuplicatedDataset& duplicated,
                                std::span<const ScoreRecord> records) {
  std::map<std::pair<TurnKey, int>, double> by_entry;
  for (const ScoreRecord& record : records) {
    if (!by_entry.emplace(std::pair{record.key, ToInt(record.label)}, record.shapley)
             .second) {
      throw DataError("duplicate score for " + record.key.ToString() +
                      " with label " + std::to_string(ToInt(record.label)));
    }
  }
  std::vector<double> scores;
  scores.reserve(duplicated.size());
  for (const DuplicatedEntry& entry : duplicated) {
    auto it = by_entry.find({entry.key, ToInt(entry.label)});
    if (it == by_entry.end()) {
      throw DataError("no score for " + entry.key.ToString() + " with label " +
                      std::to_string(ToInt(entry.label)));
    }
    scores.push_back(it->second);
  }
  if (by_entry.size() != duplicated.size()) {
    throw DataError("scores file has " + std::to_string(by_entry.size()) +
                    " entries; expected " + std::to_string(duplicated.size()));
  }
  return scores;
}

void WriteClean(const CleanDataset& clean, std::ostream& out) {
  for (const CleanEntry& entry : clean) {
    OrderedJson line;
    line["key"] = entry.key.ToString();
    line["label"] = ToInt(entry.label);
    line["shapley"] = entry.shapley;
    line["flipped"] = entry.flipped;
    out << line.dump() << '\n';
  }
}

CleanDataset ParseClean(std::istream& in) {
  CleanDataset clean;
  ForEachJsonLine(in, [&](const OrderedJson& line) {
    clean.push_back({TurnKey::Parse(line.at("key").get<std::string>()),
                     LabelFromInt(line.at("label").get<std::int64_t>()),
                     line.at("shapley").get<double>(),
                     line.at("flipped").get<bool>()});
  });
  return clean;
}

}  // namespace herald

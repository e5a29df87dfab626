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

// Heuristic labeling of user disengagement.
//
// A rule program groups intent detectors into four heuristic groups. A turn
// is disengaged when any enabled intent fires on its user utterance, either
// through a regex or through a mapped dialog-act tag. Groups 1-3 may fire on
// any segment of the utterance; group 4 ("ends with a non-positive
// response") only on the final segment.

#ifndef HERALD_HEURISTICS_H_
#define HERALD_HEURISTICS_H_

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "herald/corpus.h"
#include "herald/regex_dialect.h"
#include "herald/segmenter.h"

namespace herald {

inline constexpr int kNumGroups = 4;

enum class GroupScope { kAnySegment, kLastSegment };

struct HeuristicGroup {
  int id = 0;
  std::string name;
  GroupScope scope = GroupScope::kAnySegment;
};

struct IntentRule {
  std::string intent;
  int group = 0;
  std::vector<PortableRegex> patterns;
  // Turn-scoped: a match on any segment suppresses this rule for the turn.
  std::vector<PortableRegex> exceptions;
};

struct RuleSet {
  std::array<HeuristicGroup, kNumGroups> groups;
  std::vector<IntentRule> rules;
  std::map<std::string, std::string> dialog_act_map;  // tag -> intent
  SegmenterConfig segmenter;

  // Ablation toggles.
  std::set<int> enabled_groups = {1, 2, 3, 4};
  bool use_regex = true;
  bool use_dialog_acts = true;

  const IntentRule* FindRule(std::string_view intent) const;
  bool GroupEnabled(int group) const { return enabled_groups.contains(group); }
};

enum class RuleFormat { kToml, kJson };

// Parses and validates a rule program: every regex must be in the portable
// dialect, rule groups must be 1..4, and dialog-act mappings must name an
// existing intent. When the file has no map, the standard entries for the
// intents it defines are installed. Throws ConfigError.
RuleSet ParseRuleSet(std::string_view text, RuleFormat format);
// Format chosen by extension: ".json" is JSON, anything else TOML.
RuleSet LoadRuleSet(const std::filesystem::path& path);
// The rule program compiled into the library.
RuleSet DefaultRuleSet();
std::string_view DefaultRuleText();

std::map<std::string, std::string> DefaultDialogActMap();

enum class MatchSource { kRegex, kDialogAct };

struct IntentMatch {
  std::string intent;
  int group = 0;
  // Unset for turn-level dialog-act tags that cannot be localized.
  std::optional<int> segment_position;
  MatchSource source = MatchSource::kRegex;
};

struct MatchResult {
  Label label = Label::kEngaged;
  std::vector<IntentMatch> matched_intents;
  // Lowest-numbered group among the matches.
  std::optional<int> matched_group;

  bool CitesGroup(int group) const;
  WeakLabel ToWeakLabel() const;
};

// Pure function of the turn's user text and dialog-act tags.
MatchResult LabelTurn(const Turn& turn, const RuleSet& rules, SourceMode mode);

using MatchMap = std::map<TurnKey, MatchResult>;

MatchMap LabelCorpus(const Corpus& corpus, const RuleSet& rules);
WeakLabelMap ToWeakLabels(const MatchMap& matches);

struct CoverageReport {
  std::size_t turn_count = 0;
  std::array<std::size_t, kNumGroups> matched{};
  // Percentage of turns citing each group; a turn citing several groups
  // counts once in each.
  std::array<double, kNumGroups> percent{};
};

CoverageReport ComputeCoverage(const MatchMap& matches, const Corpus& corpus);

}  // namespace herald

#endif  // HERALD_HEURISTICS_H_

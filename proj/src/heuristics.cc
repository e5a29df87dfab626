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

#include "herald/heuristics.h"

#include <algorithm>
#include <sstream>

#include "herald/error.h"
#include "herald/file_util.h"
#include "nlohmann/json.hpp"
#include "toml.hpp"

namespace herald {
namespace {

using Json = nlohmann::json;

constexpr std::array<std::string_view, kNumGroups> kDefaultGroupNames = {
    "complain system responses", "dislike current topic",
    "request to end topic or conversation", "end with non-positive responses"};

GroupScope RequiredScope(int group) {
  return group == 4 ? GroupScope::kLastSegment : GroupScope::kAnySegment;
}

GroupScope ParseScope(const std::string& text) {
  if (text == "any_segment") return GroupScope::kAnySegment;
  if (text == "last_segment") return GroupScope::kLastSegment;
  throw ConfigError("unknown group scope \"" + text + "\"");
}

Json TomlToJson(std::string_view text) {
  try {
    const toml::table table = toml::parse(text);
    std::ostringstream out;
    out << toml::json_formatter{table};
    return Json::parse(out.str());
  } catch (const toml::parse_error& e) {
    throw ConfigError("rule file: TOML error at line " +
                      std::to_string(e.source().begin.line) + ": " +
                      std::string(e.description()));
  }
}

std::vector<PortableRegex> CompileAll(const Json& list,
                                      const std::string& where) {
  std::vector<PortableRegex> out;
  if (list.is_null()) return out;
  if (!list.is_array()) throw ConfigError(where + ": expected a list of regexes");
  for (const Json& pattern : list) {
    if (!pattern.is_string()) throw ConfigError(where + ": regex must be a string");
    try {
      out.emplace_back(pattern.get<std::string>());
    } catch (const Error& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  return out;
}

RuleSet BuildRuleSet(const Json& doc) {
  if (!doc.is_object()) throw ConfigError("rule file must be a table/object");
  RuleSet rules;
  for (int g = 1; g <= kNumGroups; ++g) {
    rules.groups[g - 1] = {g, std::string(kDefaultGroupNames[g - 1]),
                           RequiredScope(g)};
  }

  if (auto it = doc.find("group"); it != doc.end()) {
    std::set<int> seen;
    for (const Json& group : *it) {
      const int id = group.value("id", 0);
      if (id < 1 || id > kNumGroups) {
        throw ConfigError("unknown group_id " + std::to_string(id) +
                          " in [[group]] block");
      }
      if (!seen.insert(id).second) {
        throw ConfigError("group " + std::to_string(id) + " declared twice");
      }
      HeuristicGroup& target = rules.groups[id - 1];
      target.name = group.value("name", target.name);
      if (group.contains("scope")) {
        target.scope = ParseScope(group.at("scope").get<std::string>());
      }
      if (target.scope != RequiredScope(id)) {
        throw ConfigError("group " + std::to_string(id) + " must have scope " +
                          (id == 4 ? "last_segment" : "any_segment"));
      }
    }
  }

  auto rule_list = doc.find("rule");
  if (rule_list == doc.end() || !rule_list->is_array() || rule_list->empty()) {
    throw ConfigError("rule file defines no [[rule]] blocks");
  }
  std::set<std::string> intents;
  for (const Json& entry : *rule_list) {
    IntentRule rule;
    rule.intent = entry.value("intent", "");
    if (rule.intent.empty()) throw ConfigError("[[rule]] without an intent");
    const std::string where = "rule \"" + rule.intent + "\"";
    rule.group = entry.value("group", 0);
    if (rule.group < 1 || rule.group > kNumGroups) {
      throw ConfigError(where + ": unknown group_id " +
                        std::to_string(rule.group));
    }
    if (!intents.insert(rule.intent).second) {
      throw ConfigError(where + " defined twice");
    }
    rule.patterns = CompileAll(entry.value("patterns", Json()), where);
    if (rule.patterns.empty()) throw ConfigError(where + " has no patterns");
    rule.exceptions = CompileAll(entry.value("exceptions", Json()), where);
    rules.rules.push_back(std::move(rule));
  }

  if (auto it = doc.find("dialog_act_map"); it != doc.end()) {
    for (const auto& [tag, intent] : it->items()) {
      rules.dialog_act_map[tag] = intent.get<std::string>();
    }
  } else {
    // The standard map, minus entries whose intent this file does not define.
    for (const auto& [tag, intent] : DefaultDialogActMap()) {
      if (intents.contains(intent)) rules.dialog_act_map[tag] = intent;
    }
  }
  for (const auto& [tag, intent] : rules.dialog_act_map) {
    if (!intents.contains(intent)) {
      throw ConfigError("dialog act \"" + tag + "\" maps to unknown intent \"" +
                        intent + "\"");
    }
  }

  if (auto it = doc.find("segmenter"); it != doc.end()) {
    if (it->contains("markers")) {
      rules.segmenter.markers = it->at("markers").get<std::vector<std::string>>();
    }
    rules.segmenter.min_tokens = it->value("min_tokens", rules.segmenter.min_tokens);
    if (rules.segmenter.min_tokens < 1) {
      throw ConfigError("segmenter.min_tokens must be >= 1");
    }
  }
  return rules;
}

void AddMatch(MatchResult& result, IntentMatch match) {
  const bool duplicate = std::any_of(
      result.matched_intents.begin(), result.matched_intents.end(),
      [&](const IntentMatch& m) {
        return m.intent == match.intent && m.source == match.source;
      });
  if (!duplicate) result.matched_intents.push_back(std::move(match));
}

}  // namespace

const IntentRule* RuleSet::FindRule(std::string_view intent) const {
  for (const IntentRule& rule : rules) {
    if (rule.intent == intent) return &rule;
  }
  return nullptr;
}

std::map<std::string, std::string> DefaultDialogActMap() {
  return {{"complaint", "complain_system_repetition"},
          {"closing", "request_termination"},
          {"hold", "hesitation"},
          {"other_answers", "unsure_answer"},
          {"back-channeling", "back_channeling"},
          {"neg_answer", "negative_answer"}};
}

RuleSet ParseRuleSet(std::string_view text, RuleFormat format) {
  Json doc;
  if (format == RuleFormat::kJson) {
    try {
      doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw ConfigError(std::string("rule file: malformed JSON: ") + e.what());
    }
  } else {
    doc = TomlToJson(text);
  }
  try {
    return BuildRuleSet(doc);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("rule file: ") + e.what());
  }
}

RuleSet LoadRuleSet(const std::filesystem::path& path) {
  const RuleFormat format =
      path.extension() == ".json" ? RuleFormat::kJson : RuleFormat::kToml;
  try {
    return ParseRuleSet(ReadFile(path), format);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

RuleSet DefaultRuleSet() {
  static const RuleSet kDefault = ParseRuleSet(DefaultRuleText(), RuleFormat::kToml);
  return kDefault;
}

bool MatchResult::CitesGroup(int group) const {
  return std::any_of(matched_intents.begin(), matched_intents.end(),
                     [group](const IntentMatch& m) { return m.group == group; });
}

WeakLabel MatchResult::ToWeakLabel() const {
  WeakLabel weak;
  weak.label = label;
  weak.matched_group = matched_group;
  for (const IntentMatch& match : matched_intents) {
    if (std::find(weak.matched_intents.begin(), weak.matched_intents.end(),
                  match.intent) == weak.matched_intents.end()) {
      weak.matched_intents.push_back(match.intent);
    }
  }
  return weak;
}

MatchResult LabelTurn(const Turn& turn, const RuleSet& rules, SourceMode mode) {
  MatchResult result;
  const std::vector<Segment> segments =
      SegmentText(turn.user_utterance, mode, rules.segmenter);
  const int last = static_cast<int>(segments.size()) - 1;

  if (rules.use_regex) {
    for (const IntentRule& rule : rules.rules) {
      if (!rules.GroupEnabled(rule.group)) continue;
      const bool suppressed = std::any_of(
          rule.exceptions.begin(), rule.exceptions.end(),
          [&](const PortableRegex& ex) {
            return std::any_of(segments.begin(), segments.end(),
                               [&](const Segment& s) { return ex.Search(s.text); });
          });
      if (suppressed) continue;
      const int first =
          rules.groups[rule.group - 1].scope == GroupScope::kLastSegment ? last : 0;
      for (int p = first; p <= last; ++p) {
        const bool hit = std::any_of(
            rule.patterns.begin(), rule.patterns.end(),
            [&](const PortableRegex& re) { return re.Search(segments[p].text); });
        if (hit) {
          AddMatch(result, {rule.intent, rule.group, p, MatchSource::kRegex});
          break;
        }
      }
    }
  }

  if (rules.use_dialog_acts && turn.dialog_acts) {
    const DialogActs& acts = *turn.dialog_acts;
    const int lists = static_cast<int>(acts.tags.size());
    for (int i = 0; i < lists; ++i) {
      // Per-segment lists align by position and the final list always
      // describes the final segment. Turn-level tags are localized only when
      // the utterance is a single segment.
      std::optional<int> position;
      bool on_last = false;
      if (acts.per_segment) {
        on_last = i == lists - 1;
        position = on_last ? last : std::min(i, last);
      } else if (last == 0) {
        position = 0;
        on_last = true;
      }
      for (const std::string& tag : acts.tags[i]) {
        auto mapped = rules.dialog_act_map.find(tag);
        if (mapped == rules.dialog_act_map.end()) continue;
        const IntentRule* rule = rules.FindRule(mapped->second);
        if (rule == nullptr || !rules.GroupEnabled(rule->group)) continue;
        if (rules.groups[rule->group - 1].scope == GroupScope::kLastSegment &&
            !on_last) {
          continue;
        }
        AddMatch(result, {rule->intent, rule->group, position,
                          MatchSource::kDialogAct});
      }
    }
  }

  for (const IntentMatch& match : result.matched_intents) {
    if (!result.matched_group || match.group < *result.matched_group) {
      result.matched_group = match.group;
    }
  }
  result.label =
      result.matched_intents.empty() ? Label::kEngaged : Label::kDisengaged;
  return result;
}

MatchMap LabelCorpus(const Corpus& corpus, const RuleSet& rules) {
  MatchMap matches;
  for (const Dialog& dialog : corpus.dialogs) {
    for (const Turn& turn : dialog.turns) {
      matches.emplace(TurnKey{dialog.dialog_id, turn.index},
                      LabelTurn(turn, rules, dialog.source_mode));
    }
  }
  return matches;
}

WeakLabelMap ToWeakLabels(const MatchMap& matches) {
  WeakLabelMap labels;
  for (const auto& [key, match] : matches) labels.emplace(key, match.ToWeakLabel());
  return labels;
}

CoverageReport ComputeCoverage(const MatchMap& matches, const Corpus& corpus) {
  CoverageReport report;
  report.turn_count = corpus.turn_count();
  const CorpusIndex index(corpus);
  for (const auto& [key, match] : matches) {
    if (!index.Contains(key)) continue;
    for (int g = 1; g <= kNumGroups; ++g) {
      if (match.CitesGroup(g)) ++report.matched[g - 1];
    }
  }
  for (int g = 0; g < kNumGroups; ++g) {
    report.percent[g] =
        report.turn_count == 0
            ? 0.0
            : 100.0 * static_cast<double>(report.matched[g]) /
                  static_cast<double>(report.turn_count);
  }
  return report;
}

}  // namespace herald

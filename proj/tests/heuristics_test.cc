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

#include <gtest/gtest.h>

#include <algorithm>

#include <random>

#include "herald/error.h"
#include "test_util.h"

namespace herald {
namespace {

using testing::LoadEngagedExamples;
using testing::LoadRuleExamples;
using testing::SingleTurnCorpus;

Turn UserTurn(const std::string& text, std::optional<DialogActs> acts = std::nullopt) {
  Turn turn;
  turn.system_utterance = "How was your day?";
  turn.user_utterance = text;
  turn.dialog_acts = std::move(acts);
  return turn;
}

bool HasIntent(const MatchResult& result, const std::string& intent) {
  for (const IntentMatch& m : result.matched_intents) {
    if (m.intent == intent) return true;
  }
  return false;
}

constexpr char kMiniRules[] = R"(
[[group]]
id = 1
name = "one"
scope = "any_segment"
[[group]]
id = 2
name = "two"
scope = "any_segment"
[[group]]
id = 3
name = "three"
scope = "any_segment"
[[group]]
id = 4
name = "four"
scope = "last_segment"

[[rule]]
intent = "request_termination"
group = 3
patterns = ['\bbye\b']
exceptions = []
)";

std::string ConfigErrorOf(const std::string& text,
                          RuleFormat format = RuleFormat::kToml) {
  try {
    ParseRuleSet(text, format);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfig);
    return e.what();
  }
  ADD_FAILURE() << "rule file was accepted";
  return "";
}

TEST(DefaultRuleSet, FourGroupsAndAllIntents) {
  const RuleSet rules = DefaultRuleSet();
  EXPECT_EQ(rules.groups[3].scope, GroupScope::kLastSegment);
  for (int g = 0; g < 3; ++g) EXPECT_EQ(rules.groups[g].scope, GroupScope::kAnySegment);
  EXPECT_GE(rules.rules.size(), 14u);
  for (const auto& example : LoadRuleExamples()) {
    const IntentRule* rule = rules.FindRule(example.intent);
    ASSERT_NE(rule, nullptr) << example.intent;
    EXPECT_EQ(rule->group, example.group);
  }
}

TEST(DefaultRuleSet, StandardDialogActMap) {
  const auto map = DefaultRuleSet().dialog_act_map;
  EXPECT_EQ(map.at("complaint"), "complain_system_repetition");
  EXPECT_EQ(map.at("closing"), "request_termination");
  EXPECT_EQ(map.at("hold"), "hesitation");
  EXPECT_EQ(map.at("other_answers"), "unsure_answer");
  EXPECT_EQ(map.at("back-channeling"), "back_channeling");
  EXPECT_EQ(map.at("neg_answer"), "negative_answer");
  EXPECT_EQ(DefaultDialogActMap(), map);
}

TEST(LabelTurn, EveryRuleExampleFiresInItsGroup) {
  const RuleSet rules = DefaultRuleSet();
  for (const auto& example : LoadRuleExamples()) {
    for (SourceMode mode : {SourceMode::kText, SourceMode::kAsr}) {
      const MatchResult result = LabelTurn(UserTurn(example.utterance), rules, mode);
      EXPECT_EQ(result.label, Label::kDisengaged) << example.utterance;
      EXPECT_TRUE(result.CitesGroup(example.group)) << example.utterance;
      EXPECT_TRUE(HasIntent(result, example.intent)) << example.utterance;
    }
  }
}

TEST(LabelTurn, CounterexamplesStayEngaged) {
  const RuleSet rules = DefaultRuleSet();
  for (const std::string& text : LoadEngagedExamples()) {
    const MatchResult result = LabelTurn(UserTurn(text), rules, SourceMode::kText);
    EXPECT_EQ(result.label, Label::kEngaged) << text;
    EXPECT_TRUE(result.matched_intents.empty()) << text;
  }
}

TEST(LabelTurn, SpecificIntentsAndGroups) {
  const RuleSet rules = DefaultRuleSet();
  MatchResult r = LabelTurn(UserTurn("You already asked me that."), rules, SourceMode::kText);
  EXPECT_EQ(r.matched_group, 1);
  EXPECT_TRUE(HasIntent(r, "complain_system_repetition"));
  r = LabelTurn(UserTurn("Let's talk about something else."), rules, SourceMode::kText);
  EXPECT_EQ(r.matched_group, 3);
  EXPECT_TRUE(HasIntent(r, "request_topic_change"));
}

TEST(LabelTurn, GroupFourOnlyOnLastSegment) {
  const RuleSet rules = DefaultRuleSet();
  EXPECT_EQ(LabelTurn(UserTurn("No. Have you?"), rules, SourceMode::kText).label,
            Label::kEngaged);
  EXPECT_EQ(LabelTurn(UserTurn("Have you? No."), rules, SourceMode::kText).label,
            Label::kDisengaged);
  EXPECT_EQ(LabelTurn(UserTurn("i don't know but it might actually be frozen two"), rules,
                      SourceMode::kAsr)
                .label,
            Label::kEngaged);
}

TEST(LabelTurn, NeutralStatementsAreEngaged) {
  const RuleSet rules = DefaultRuleSet();
  for (const char* text : {"I watched a great movie about space yesterday.",
                           "My sister plays the violin in an orchestra.",
                           "What is your favorite food?"}) {
    EXPECT_EQ(LabelTurn(UserTurn(text), rules, SourceMode::kText).label, Label::kEngaged)
        << text;
  }
}

TEST(LabelTurn, DialogActsMapToIntents) {
  const RuleSet rules = DefaultRuleSet();
  const MatchResult closing = LabelTurn(
      UserTurn("i have to go now", DialogActs{false, {{"closing"}}}), rules,
      SourceMode::kAsr);
  EXPECT_EQ(closing.label, Label::kDisengaged);
  EXPECT_TRUE(std::any_of(closing.matched_intents.begin(), closing.matched_intents.end(),
                          [](const IntentMatch& m) {
                            return m.intent == "request_termination" && m.source == MatchSource::kDialogAct;
                          }));
  EXPECT_EQ(closing.matched_group, 3);

  // A group-4 act on a non-final segment does not fire.
  const MatchResult early = LabelTurn(
      UserTurn("nope. what about you?", DialogActs{true, {{"neg_answer"}, {"open_question"}}}),
      rules, SourceMode::kText);
  EXPECT_EQ(early.label, Label::kEngaged);
  // Unknown tags are ignored.
  EXPECT_EQ(LabelTurn(UserTurn("sure thing pal", DialogActs{false, {{"pos_answer"}}}), rules,
                      SourceMode::kText)
                .label,
            Label::kEngaged);
}

TEST(LabelTurn, SourceToggles) {
  RuleSet rules = DefaultRuleSet();
  const Turn turn = UserTurn("bye", DialogActs{false, {{"closing"}}});
  rules.use_dialog_acts = false;
  EXPECT_EQ(LabelTurn(turn, rules, SourceMode::kText).matched_intents[0].source,
            MatchSource::kRegex);
  rules.use_dialog_acts = true;
  rules.use_regex = false;
  EXPECT_EQ(LabelTurn(turn, rules, SourceMode::kText).matched_intents[0].source,
            MatchSource::kDialogAct);
  rules.use_dialog_acts = false;
  EXPECT_EQ(LabelTurn(turn, rules, SourceMode::kText).label, Label::kEngaged);
}

TEST(LabelCorpus, DisablingGroupFourFlipsOnlyItsRows) {
  std::vector<std::string> texts;
  for (const auto& example : LoadRuleExamples()) texts.push_back(example.utterance);
  const Corpus corpus = SingleTurnCorpus(texts);
  RuleSet rules = DefaultRuleSet();
  const MatchMap all = LabelCorpus(corpus, rules);
  std::size_t disengaged = 0;
  for (const auto& [key, result] : all) disengaged += result.label == Label::kDisengaged;
  EXPECT_EQ(disengaged, texts.size());

  rules.enabled_groups = {1, 2, 3};
  const MatchMap without = LabelCorpus(corpus, rules);
  const auto examples = LoadRuleExamples();
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const Label label = without.at({"ex" + std::to_string(i), 0}).label;
    EXPECT_EQ(label, examples[i].group == 4 ? Label::kEngaged : Label::kDisengaged)
        << examples[i].utterance;
  }
}

// Random mixes of example phrases and neutral text, with random tags.
Corpus RandomCorpus(std::uint64_t seed) {
  const auto examples = LoadRuleExamples();
  const std::vector<std::string> neutral = {"I like pizza.", "tell me more",
                                            "we went hiking", "Have you?"};
  const std::vector<std::string> tags = {"closing", "neg_answer", "hold", "statement",
                                         "pos_answer"};
  std::mt19937_64 rng(seed);
  Corpus corpus;
  for (int d = 0; d < 40; ++d) {
    Dialog dialog;
    dialog.dialog_id = "r" + std::to_string(d);
    dialog.source_mode = rng() % 2 ? SourceMode::kAsr : SourceMode::kText;
    for (int t = 0; t < 3; ++t) {
      std::string text;
      const int parts = 1 + static_cast<int>(rng() % 3);
      for (int p = 0; p < parts; ++p) {
        if (p) text += ' ';
        text += rng() % 2 ? examples[rng() % examples.size()].utterance
                          : neutral[rng() % neutral.size()];
      }
      Turn turn = UserTurn(text);
      turn.index = t;
      if (rng() % 2) turn.dialog_acts = DialogActs{false, {{tags[rng() % tags.size()]}}};
      dialog.turns.push_back(turn);
    }
    corpus.dialogs.push_back(dialog);
  }
  return corpus;
}

TEST(LabelCorpus, DisablingGroupsIsMonotone) {
  const Corpus corpus = RandomCorpus(11);
  const RuleSet base = DefaultRuleSet();
  const MatchMap full = LabelCorpus(corpus, base);
  for (int mask = 0; mask < 16; ++mask) {
    RuleSet rules = base;
    rules.enabled_groups.clear();
    for (int g = 1; g <= 4; ++g) {
      if (mask & (1 << (g - 1))) rules.enabled_groups.insert(g);
    }
    for (const auto& [key, result] : LabelCorpus(corpus, rules)) {
      if (result.label == Label::kDisengaged) {
        EXPECT_EQ(full.at(key).label, Label::kDisengaged) << key.ToString();
      }
    }
  }
}

TEST(LabelCorpus, SourceSplitsUnionToFullRun) {
  const Corpus corpus = RandomCorpus(12);
  RuleSet rules = DefaultRuleSet();
  const MatchMap both = LabelCorpus(corpus, rules);
  rules.use_dialog_acts = false;
  const MatchMap regex_only = LabelCorpus(corpus, rules);
  rules.use_dialog_acts = true;
  rules.use_regex = false;
  const MatchMap nlu_only = LabelCorpus(corpus, rules);
  for (const auto& [key, result] : both) {
    const bool either = regex_only.at(key).label == Label::kDisengaged ||
                        nlu_only.at(key).label == Label::kDisengaged;
    EXPECT_EQ(result.label == Label::kDisengaged, either) << key.ToString();
  }
}

TEST(LabelCorpus, Deterministic) {
  const Corpus corpus = RandomCorpus(13);
  EXPECT_EQ(ToWeakLabels(LabelCorpus(corpus, DefaultRuleSet())),
            ToWeakLabels(LabelCorpus(corpus, DefaultRuleSet())));
}

TEST(Coverage, Arithmetic) {
  std::vector<std::string> texts(95, "I like trains.");
  for (int i = 0; i < 5; ++i) texts.push_back("Let's talk about something else.");
  const Corpus corpus = SingleTurnCorpus(texts);
  const CoverageReport report = ComputeCoverage(LabelCorpus(corpus, DefaultRuleSet()), corpus);
  EXPECT_EQ(report.turn_count, 100u);
  EXPECT_DOUBLE_EQ(report.percent[2], 5.0);
  EXPECT_DOUBLE_EQ(report.percent[0], 0.0);

  const Corpus none = SingleTurnCorpus({"I like trains."});
  for (double p : ComputeCoverage(LabelCorpus(none, DefaultRuleSet()), none).percent) {
    EXPECT_EQ(p, 0.0);
  }
}

TEST(Coverage, MultiGroupTurnCountsInEach) {
  const Corpus corpus = SingleTurnCorpus({"You're dumb. Bye."});
  const MatchMap matches = LabelCorpus(corpus, DefaultRuleSet());
  const MatchResult& result = matches.begin()->second;
  EXPECT_EQ(result.matched_group, 1);
  const CoverageReport report = ComputeCoverage(matches, corpus);
  EXPECT_DOUBLE_EQ(report.percent[0], 100.0);
  EXPECT_DOUBLE_EQ(report.percent[2], 100.0);
}

TEST(ParseRuleSet, MinimalFileGetsDefaultActMap) {
  const RuleSet rules = ParseRuleSet(kMiniRules, RuleFormat::kToml);
  ASSERT_EQ(rules.rules.size(), 1u);
  // Only mappings whose intent exists are installed.
  EXPECT_EQ(rules.dialog_act_map.at("closing"), "request_termination");
}

TEST(ParseRuleSet, ExplicitMappingKeptVerbatim) {
  const RuleSet rules = ParseRuleSet(
      std::string(kMiniRules) + "\n[dialog_act_map]\nclosing = \"request_termination\"\n",
      RuleFormat::kToml);
  EXPECT_EQ(rules.dialog_act_map.size(), 1u);
  EXPECT_EQ(rules.dialog_act_map.at("closing"), "request_termination");
}

TEST(ParseRuleSet, Errors) {
  EXPECT_NE(ConfigErrorOf(std::string(kMiniRules) +
                          "[[rule]]\nintent = \"x\"\ngroup = 3\npatterns = ['(?<=x)y']\n")
                .find("lookbehind not in portable dialect"),
            std::string::npos);
  EXPECT_NE(ConfigErrorOf(std::string(kMiniRules) +
                          "[[rule]]\nintent = \"x\"\ngroup = 7\npatterns = ['y']\n")
                .find("unknown group_id 7"),
            std::string::npos);
  EXPECT_NE(ConfigErrorOf(std::string(kMiniRules) +
                          "[dialog_act_map]\nclosing = \"no_such_intent\"\n")
                .find("unknown intent"),
            std::string::npos);
  ConfigErrorOf("this is = not toml [");
  ConfigErrorOf("{\"rule\": 3}", RuleFormat::kJson);
}

TEST(ParseRuleSet, JsonFormat) {
  const std::string json = R"({
    "group": [{"id": 1, "name": "a", "scope": "any_segment"},
              {"id": 2, "name": "b", "scope": "any_segment"},
              {"id": 3, "name": "c", "scope": "any_segment"},
              {"id": 4, "name": "d", "scope": "last_segment"}],
    "rule": [{"intent": "request_termination", "group": 3, "patterns": ["\\bbye\\b"]}],
    "segmenter": {"markers": ["then"], "min_tokens": 1}
  })";
  const RuleSet rules = ParseRuleSet(json, RuleFormat::kJson);
  EXPECT_EQ(rules.segmenter.markers, std::vector<std::string>{"then"});
  EXPECT_EQ(LabelTurn(UserTurn("ok bye"), rules, SourceMode::kText).label,
            Label::kDisengaged);
}

TEST(ParseRuleSet, ShippedFileMatchesCompiledDefault) {
  const RuleSet from_file = LoadRuleSet(std::string(HERALD_TEST_DATA) +
                                        "/../../data/rules/default_rules.toml");
  EXPECT_EQ(from_file.rules.size(), DefaultRuleSet().rules.size());
}

}  // namespace
}  // namespace herald

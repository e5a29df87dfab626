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

#include <gtest/gtest.h>

#include <random>

#include "herald/error.h"
#include "test_util.h"

namespace herald {
namespace {

using testing::LoadEngagedExamples;
using testing::LoadRuleExamples;
using testing::RandomLabels;
using testing::RandomMatrix;
using testing::SingleTurnCorpus;

constexpr Label k0 = Label::kEngaged;
constexpr Label k1 = Label::kDisengaged;

struct Instance {
  FeatureMatrix train;
  std::vector<Label> labels;
  std::vector<double> scores;
  FeatureMatrix eval;
  std::vector<Label> eval_labels;
};

Instance RandomInstance(std::uint64_t seed, std::size_t n = 40) {
  std::mt19937_64 rng(seed);
  Instance out{RandomMatrix(rng, n, 3), RandomLabels(rng, n), {}, RandomMatrix(rng, 30, 3),
               RandomLabels(rng, 30)};
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) out.scores.push_back(unit(rng));
  out.eval_labels[0] = k0;
  out.eval_labels[1] = k1;
  return out;
}

const AblationRow& Row(const std::vector<AblationRow>& rows, const std::string& name) {
  for (const AblationRow& row : rows) {
    if (row.toggle.name == name) return row;
  }
  throw std::runtime_error("no ablation row " + name);
}

TEST(RemovalOrder, Strategies) {
  const double scores[] = {0.3, -0.1, 0.3, 0.0};
  EXPECT_EQ(RemovalOrder(scores, RemovalStrategy::kLowFirst, 0),
            (std::vector<std::size_t>{1, 3, 0, 2}));
  EXPECT_EQ(RemovalOrder(scores, RemovalStrategy::kHighFirst, 0),
            (std::vector<std::size_t>{0, 2, 3, 1}));
  const auto a = RemovalOrder(scores, RemovalStrategy::kRandom, 5);
  EXPECT_EQ(a, RemovalOrder(scores, RemovalStrategy::kRandom, 5));
  EXPECT_EQ(ParseRemovalStrategy("retain_hurtful"), RemovalStrategy::kHighFirst);
  EXPECT_EQ(ToString(RemovalStrategy::kRandom), "random");
  EXPECT_THROW(ParseRemovalStrategy("sideways"), Error);
}

TEST(RemovalCurve, StartsAtBaseMetric) {
  const Instance in = RandomInstance(1);
  const RemovalCurve curve = ComputeRemovalCurve(
      in.train, in.labels, in.scores, in.eval, in.eval_labels, RemovalStrategy::kLowFirst,
      {.k = 5, .step = 7});
  const KnnModel model{in.train, in.labels, 5};
  std::vector<Label> predictions;
  for (std::size_t i = 0; i < in.eval.rows(); ++i) {
    predictions.push_back(KnnPredict(model, in.eval.Row(i)).label);
  }
  ASSERT_FALSE(curve.points.empty());
  EXPECT_EQ(curve.points[0].removed, 0u);
  EXPECT_EQ(curve.points[0].balanced_accuracy,
            Evaluate(predictions, in.eval_labels).balanced_accuracy);
  // 0, 7, ..., 35 removed out of 40.
  ASSERT_EQ(curve.points.size(), 6u);
  EXPECT_EQ(curve.points.back().removed, 35u);
}

TEST(RemovalCurve, RandomIsReproducible) {
  const Instance in = RandomInstance(2);
  const CurveConfig config{.k = 3, .step = 5, .seed = 11};
  const auto a = ComputeRemovalCurve(in.train, in.labels, in.scores, in.eval, in.eval_labels,
                                     RemovalStrategy::kRandom, config);
  const auto b = ComputeRemovalCurve(in.train, in.labels, in.scores, in.eval, in.eval_labels,
                                     RemovalStrategy::kRandom, config);
  EXPECT_EQ(CurveCsv(a), CurveCsv(b));
}

TEST(RemovalCurve, RemovingMislabeledPointsHelps) {
  // Two clusters; a few points in each carry the wrong label and the lowest
  // scores.
  std::mt19937_64 rng(3);
  std::normal_distribution<float> noise(0.0f, 0.3f);
  const std::size_t n = 40;
  FeatureMatrix train(n, 2);
  std::vector<Label> labels;
  std::vector<double> scores;
  for (std::size_t i = 0; i < n; ++i) {
    const bool positive = i % 2 == 0;
    const float c = positive ? 1.0f : -1.0f;
    train.MutableRow(i)[0] = c + noise(rng);
    train.MutableRow(i)[1] = c + noise(rng);
    const bool wrong = i < 12;
    labels.push_back((positive != wrong) ? k1 : k0);
    scores.push_back(wrong ? -1.0 : 1.0);
  }
  FeatureMatrix eval(20, 2);
  std::vector<Label> eval_labels;
  for (std::size_t i = 0; i < 20; ++i) {
    const float c = i % 2 == 0 ? 1.0f : -1.0f;
    eval.MutableRow(i)[0] = c + noise(rng);
    eval.MutableRow(i)[1] = c + noise(rng);
    eval_labels.push_back(i % 2 == 0 ? k1 : k0);
  }
  const CurveConfig config{.k = 5, .step = 4, .max_removed = 20};
  const auto low = ComputeRemovalCurve(train, labels, scores, eval, eval_labels,
                                       RemovalStrategy::kLowFirst, config);
  const auto high = ComputeRemovalCurve(train, labels, scores, eval, eval_labels,
                                        RemovalStrategy::kHighFirst, config);
  EXPECT_GT(low.points[3].balanced_accuracy, low.points[0].balanced_accuracy);
  EXPECT_LE(high.points.back().balanced_accuracy, low.points.back().balanced_accuracy);

  const auto refit = ComputeRemovalCurve(train, labels, scores, eval, eval_labels,
                                         RemovalStrategy::kLowFirst,
                                         {.step = 12, .max_removed = 12, .refit_head = true});
  ASSERT_EQ(refit.points.size(), 2u);
  EXPECT_EQ(refit.points[1].balanced_accuracy, 1.0);
}

TEST(RemovalCurve, StepErrors) {
  const Instance in = RandomInstance(4, 10);
  EXPECT_THROW(ComputeRemovalCurve(in.train, in.labels, in.scores, in.eval, in.eval_labels,
                                   RemovalStrategy::kLowFirst, {.step = 0}),
               Error);
  EXPECT_THROW(ComputeRemovalCurve(in.train, in.labels, in.scores, in.eval, in.eval_labels,
                                   RemovalStrategy::kLowFirst, {.step = 11}),
               Error);
  const std::vector<double> short_scores(3, 0.0);
  EXPECT_THROW(ComputeRemovalCurve(in.train, in.labels, short_scores, in.eval,
                                   in.eval_labels, RemovalStrategy::kLowFirst, {}),
               Error);
}

TEST(CurveCsv, Format) {
  RemovalCurve curve;
  curve.points = {{0, 0.75, 0.5}, {10, 0.8, 0.25}};
  EXPECT_EQ(CurveCsv(curve), "removed,metric\n0,0.75\n10,0.80000000000000004\n");
  EXPECT_EQ(CurveCsv(curve, true), "removed,metric\n0,0.5\n10,0.25\n");
}

TEST(Ablation, StandardToggles) {
  const auto toggles = StandardAblations();
  ASSERT_EQ(toggles.size(), 7u);
  EXPECT_EQ(toggles[0].name, "all");
  EXPECT_FALSE(toggles[1].use_dialog_acts);
  EXPECT_FALSE(toggles[2].use_regex);
  EXPECT_EQ(toggles[6].groups, (std::set<int>{1, 2, 3}));
}

TEST(Ablation, GroupFourOnlyCorpus) {
  std::vector<std::string> utterances;
  for (const auto& example : LoadRuleExamples()) {
    if (example.group == 4) utterances.push_back(example.utterance);
  }
  ASSERT_FALSE(utterances.empty());
  const auto toggles = StandardAblations();
  const auto rows = RunAblation(SingleTurnCorpus(utterances), DefaultRuleSet(), toggles);
  EXPECT_EQ(Row(rows, "all").report.recall, 1.0);
  EXPECT_EQ(Row(rows, "without_group_4").report.recall, 0.0);
  EXPECT_EQ(Row(rows, "without_group_4").disengaged, 0u);
}

TEST(Ablation, RuleExamplesScorePerfectly) {
  std::vector<std::string> utterances;
  for (const auto& example : LoadRuleExamples()) utterances.push_back(example.utterance);
  const auto toggles = StandardAblations();
  const auto rows = RunAblation(SingleTurnCorpus(utterances), DefaultRuleSet(), toggles);
  EXPECT_EQ(Row(rows, "all").report.balanced_accuracy, 1.0);
  EXPECT_EQ(Row(rows, "all").disengaged, utterances.size());
}

TEST(Ablation, RegexAndDialogActsUnion) {
  std::vector<std::string> utterances;
  for (const auto& example : LoadRuleExamples()) utterances.push_back(example.utterance);
  for (const auto& text : LoadEngagedExamples()) utterances.push_back(text);
  for (const char* text : {"mhm", "see you", "great question", "I love hiking"}) {
    utterances.push_back(text);
  }
  Corpus corpus = SingleTurnCorpus(utterances);
  // Tags on a few turns, some where regexes already fire and some where they
  // do not.
  const std::vector<std::pair<std::size_t, std::string>> tags = {
      {0, "complaint"}, {14, "neg_answer"}, {25, "back-channeling"}, {26, "closing"}};
  for (const auto& [index, tag] : tags) {
    corpus.dialogs[index].turns[0].dialog_acts = DialogActs{false, {{tag}}};
  }
  corpus.dialogs.back().turns[0].gold_label = k0;

  const RuleSet rules = DefaultRuleSet();
  std::size_t in_union = 0;
  for (const Dialog& dialog : corpus.dialogs) {
    RuleSet regex = rules;
    regex.use_dialog_acts = false;
    RuleSet nlu = rules;
    nlu.use_regex = false;
    const bool r = LabelTurn(dialog.turns[0], regex, dialog.source_mode).label == k1;
    const bool n = LabelTurn(dialog.turns[0], nlu, dialog.source_mode).label == k1;
    in_union += r || n;
  }
  const auto toggles = StandardAblations();
  const auto rows = RunAblation(corpus, rules, toggles);
  EXPECT_EQ(Row(rows, "all").disengaged, in_union);
  EXPECT_GT(in_union, Row(rows, "regex_only").disengaged);
  EXPECT_EQ(Row(rows, "nlu_only").disengaged, 4u);

  const OrderedJson json = AblationJson(rows);
  ASSERT_EQ(json.size(), 7u);
  EXPECT_EQ(json[0]["name"], "all");
  EXPECT_TRUE(json[0]["report"].contains("balanced_accuracy"));
}

}  // namespace
}  // namespace herald

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


#include "herald/model.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "herald/error.h"
#include "test_util.h"

namespace herald {
namespace {

using testing::MaxGradientRelativeError;
using testing::RandomHead;
using testing::RandomLabels;
using testing::RandomMatrix;

constexpr Label k0 = Label::kEngaged;
constexpr Label k1 = Label::kDisengaged;

// Two tight clusters around (+3, +3) and (-3, -3).
struct Clusters {
  FeatureMatrix features;
  std::vector<Label> labels;
};

Clusters TwoClusters(std::size_t per_class) {
  std::mt19937_64 rng(3);
  std::normal_distribution<float> noise(0.0f, 0.2f);
  Clusters out{FeatureMatrix(2 * per_class, 2), {}};
  for (std::size_t i = 0; i < 2 * per_class; ++i) {
    const float center = i < per_class ? 3.0f : -3.0f;
    auto row = out.features.MutableRow(i);
    row[0] = center + noise(rng);
    row[1] = center + noise(rng);
    out.labels.push_back(i < per_class ? k1 : k0);
  }
  return out;
}

TEST(KnnVote, SevenOfTen) {
  std::vector<Label> nearest(10, k0);
  for (int i = 0; i < 7; ++i) nearest[i] = k1;
  const KnnPrediction p = KnnVote(nearest, 10);
  EXPECT_DOUBLE_EQ(p.posterior[1], 0.7);
  EXPECT_DOUBLE_EQ(p.posterior[0], 0.3);
  EXPECT_EQ(p.label, k1);
}

TEST(KnnVote, DenominatorIsK) {
  const KnnModel model{FeatureMatrix(1, 2, {1.0f, 1.0f}), {k1}, 10};
  const float x[] = {0.0f, 0.0f};
  const KnnPrediction p = KnnPredict(model, x);
  EXPECT_DOUBLE_EQ(p.posterior[1], 0.1);
  EXPECT_DOUBLE_EQ(p.posterior[0], 0.0);
  EXPECT_EQ(p.label, k1);
}

TEST(KnnVote, EvenSplitGoesToNearest) {
  const Label a[] = {k1, k0};
  EXPECT_EQ(KnnVote(a, 2).label, k1);
  const Label b[] = {k0, k1, k1, k0};
  EXPECT_EQ(KnnVote(b, 4).label, k0);
  EXPECT_THROW(KnnVote(a, 0), Error);
}

TEST(KnnPredict, ExactMatchIsNearest) {
  const KnnModel model{FeatureMatrix(3, 1, {5.0f, 0.5f, 0.4f}), {k0, k1, k0}, 1};
  const float x[] = {0.5f};
  EXPECT_EQ(KnnPredict(model, x).label, k1);
  const float wide[] = {0.5f, 0.5f};
  EXPECT_THROW(KnnPredict(model, wide), Error);
}

TEST(TrainLinearHead, SeparatesClusters) {
  const Clusters data = TwoClusters(20);
  const TrainResult result = TrainLinearHead(data.features, data.labels, {});
  for (std::size_t i = 0; i < data.labels.size(); ++i) {
    EXPECT_EQ(DecideLinear(result.head, data.features.Row(i)), data.labels[i]) << i;
  }
  EXPECT_EQ(result.loss_trace.size(), 500u);
}

TEST(TrainLinearHead, ZeroEpochsReturnsZeroHead) {
  const Clusters data = TwoClusters(5);
  const TrainResult result = TrainLinearHead(data.features, data.labels, {.epochs = 0});
  EXPECT_EQ(result.head, LinearHead::Zero(2));
  EXPECT_TRUE(result.loss_trace.empty());
  const Posterior p = PredictLinear(result.head, data.features.Row(0));
  EXPECT_EQ(p[0], 0.5);
  EXPECT_EQ(p[1], 0.5);
}

TEST(TrainLinearHead, LossNonIncreasingAtSmallRate) {
  const Clusters data = TwoClusters(20);
  const TrainResult result =
      TrainLinearHead(data.features, data.labels, {.learning_rate = 0.01, .epochs = 300});
  for (std::size_t i = 1; i < result.loss_trace.size(); ++i) {
    EXPECT_LE(result.loss_trace[i], result.loss_trace[i - 1]) << i;
  }
}

TEST(TrainLinearHead, Errors) {
  const FeatureMatrix features(2, 1, {1.0f, 2.0f});
  const std::vector<Label> same = {k1, k1};
  EXPECT_THROW(TrainLinearHead(features, same, {}), Error);
  const std::vector<Label> both = {k0, k1};
  EXPECT_THROW(TrainLinearHead(features, both, {.learning_rate = 0.0}), Error);
  // A huge rate on large features overflows the logits.
  const FeatureMatrix large(2, 1, {1e30f, -1e30f});
  try {
    TrainLinearHead(large, both, {.learning_rate = 1e30, .epochs = 50});
    FAIL() << "expected divergence";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDataValidation);
    EXPECT_NE(std::string(e.what()).find("diverged"), std::string::npos);
  }
}

TEST(LossAndGrad, MatchesFiniteDifferences) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t dim = 1 + rng() % 6;
    const std::size_t n = 2 + rng() % 10;
    const FeatureMatrix features = RandomMatrix(rng, n, dim);
    const auto labels = RandomLabels(rng, n);
    const LinearHead head = RandomHead(rng, dim);
    EXPECT_LE(MaxGradientRelativeError(head, features, labels, 1e-2), 1e-4) << trial;
  }
}

TEST(LossAndGrad, BiasGradientAtOrigin) {
  // Predicted frequencies are 0.5 each; empirical are 0.25 / 0.75.
  const FeatureMatrix features(4, 2, {1, 2, 3, 4, 5, 6, 7, 8});
  const std::vector<Label> labels = {k0, k1, k1, k1};
  const LossAndGradient out = LossAndGrad(LinearHead::Zero(2), features, labels, 0.0);
  EXPECT_DOUBLE_EQ(out.gradient.bias[0], 0.5 - 0.25);
  EXPECT_DOUBLE_EQ(out.gradient.bias[1], 0.5 - 0.75);
  EXPECT_DOUBLE_EQ(out.loss, std::log(2.0));
}

TEST(LossAndGrad, ZeroFeaturesGiveZeroWeightGradient) {
  std::mt19937_64 rng(22);
  const FeatureMatrix features(5, 3);
  const auto labels = RandomLabels(rng, 5);
  const LossAndGradient out = LossAndGrad(RandomHead(rng, 3), features, labels, 0.0);
  for (double g : out.gradient.weights) EXPECT_EQ(g, 0.0);
}

TEST(LossAndGrad, ShapeMismatch) {
  const FeatureMatrix features(2, 2);
  const std::vector<Label> labels = {k0};
  EXPECT_THROW(LossAndGrad(LinearHead::Zero(2), features, labels, 0.0), Error);
  const std::vector<Label> two = {k0, k1};
  EXPECT_THROW(LossAndGrad(LinearHead::Zero(3), features, two, 0.0), Error);
}

TEST(PredictLinear, SoftmaxProperties) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const LinearHead head = RandomHead(rng, 4, 5.0);
    const FeatureMatrix x = RandomMatrix(rng, 1, 4);
    const Posterior p = PredictLinear(head, x.Row(0));
    EXPECT_NEAR(p[0] + p[1], 1.0, 1e-12);
    LinearHead shifted = head;
    shifted.bias[0] += 3.0;
    shifted.bias[1] += 3.0;
    const Posterior q = PredictLinear(shifted, x.Row(0));
    EXPECT_NEAR(p[1], q[1], 1e-12);
  }
  const float wide[] = {1.0f, 2.0f};
  EXPECT_THROW(PredictLinear(LinearHead::Zero(3), wide), Error);
}

TEST(ModelFile, RoundTripAndValidation) {
  std::mt19937_64 rng(24);
  ModelFile model{RandomHead(rng, 3), OrderedJson::object()};
  model.metadata["detector"] = "linear";
  const std::string text = SerializeModel(model);
  const ModelFile back = ParseModel(text);
  EXPECT_EQ(back.head, model.head);
  EXPECT_EQ(back.metadata, model.metadata);
  EXPECT_EQ(SerializeModel(back), text);

  testing::TempDir dir;
  SaveModel(model, dir / "m.json");
  EXPECT_EQ(LoadModel(dir / "m.json").head, model.head);

  EXPECT_THROW(ParseModel("{"), Error);
  EXPECT_THROW(ParseModel(R"({"dim": 2, "weights": [1, 2, 3], "bias": [0, 0]})"), Error);
  EXPECT_THROW(ParseModel(R"({"dim": 1, "weights": [1, 2], "bias": [0]})"), Error);
  EXPECT_THROW(LoadModel(dir / "absent.json"), Error);
}

}  // namespace
}  // namespace herald

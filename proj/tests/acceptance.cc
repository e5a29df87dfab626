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


// Acceptance suite: one [PASS]/[FAIL] line per criterion, exit status 1 if
// any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "herald/denoiser.h"
#include "herald/embedding.h"
#include "herald/error.h"
#include "herald/experiments.h"
#include "herald/heuristics.h"
#include "herald/metrics.h"
#include "herald/model.h"
#include "herald/pipeline.h"
#include "herald/valuation.h"
#include "herald/workflow.h"
#include "spdlog/fmt/fmt.h"
#include "spdlog/spdlog.h"
#include "test_util.h"

namespace herald {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct RandomInstance {
  FeatureMatrix train;
  std::vector<Label> labels;
  FeatureMatrix dev;
  std::vector<Label> dev_labels;
  int k = 1;
};

// 200 instances with N <= 8, dim <= 4, K in {1, 2, 5}, dev <= 3.
std::vector<RandomInstance> SmallInstances() {
  std::mt19937_64 rng(20261016);
  std::vector<RandomInstance> out;
  const int ks[] = {1, 2, 5};
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + rng() % 8;
    const std::size_t dim = 1 + rng() % 4;
    const std::size_t m = 1 + rng() % 3;
    RandomInstance in{testing::RandomMatrix(rng, n, dim), testing::RandomLabels(rng, n),
                      testing::RandomMatrix(rng, m, dim), testing::RandomLabels(rng, m),
                      ks[rng() % 3]};
    out.push_back(std::move(in));
  }
  return out;
}

Verdict OracleEquivalence() {
  const auto start = Clock::now();
  double worst = 0.0;
  for (const RandomInstance& in : SmallInstances()) {
    const auto closed =
        ShapleyMultiDev(in.train, in.labels, in.dev, in.dev_labels, {.k = in.k}).values;
    const auto brute = ShapleyBruteForce(in.train, in.labels, in.dev, in.dev_labels, in.k).values;
    for (std::size_t i = 0; i < closed.size(); ++i) {
      worst = std::max(worst, std::abs(closed[i] - brute[i]));
    }
  }
  const double elapsed = Seconds(start);
  return {worst <= 1e-9 && elapsed < 10.0,
          fmt::format("200 instances, max |closed - brute| = {:.3g} (limit 1e-9), {:.2f} s "
                      "(limit 10 s)",
                      worst, elapsed)};
}

Verdict Efficiency() {
  double worst = 0.0;
  for (const RandomInstance& in : SmallInstances()) {
    const auto values =
        ShapleyMultiDev(in.train, in.labels, in.dev, in.dev_labels, {.k = in.k}).values;
    const double total = std::accumulate(values.begin(), values.end(), 0.0);
    const double full = FullUtility(in.train, in.labels, in.dev, in.dev_labels, in.k);
    worst = std::max(worst, std::abs(total - full));
  }
  return {worst <= 1e-9,
          fmt::format("200 instances, max |sum s_i - v(D)| = {:.3g} (limit 1e-9)", worst)};
}

Verdict MultiDevAveraging() {
  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 200;
    const std::size_t m = 1 + rng() % 70;
    const std::size_t dim = 1 + rng() % 16;
    const int k = 1 + static_cast<int>(rng() % 12);
    const FeatureMatrix train = testing::RandomMatrix(rng, n, dim);
    const auto labels = testing::RandomLabels(rng, n);
    const FeatureMatrix dev = testing::RandomMatrix(rng, m, dim);
    const auto dev_labels = testing::RandomLabels(rng, m);
    const auto multi = ShapleyMultiDev(train, labels, dev, dev_labels, {.k = k}).values;
    std::vector<double> mean(n, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      const auto single =
          ShapleySingleDev(SortNeighbors(train, dev.Row(j)), labels, dev_labels[j], k).values;
      for (std::size_t i = 0; i < n; ++i) mean[i] += single[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      worst = std::max(worst, std::abs(multi[i] - mean[i] / static_cast<double>(m)));
    }
  }
  return {worst <= 1e-12,
          fmt::format("100 instances, max |multi - mean of single| = {:.3g} (limit 1e-12)", worst)};
}

Verdict HeuristicsFidelity() {
  const RuleSet rules = DefaultRuleSet();
  std::size_t ok = 0, total = 0;
  std::string first_miss;
  auto turn_of = [](const std::string& text) {
    Turn turn;
    turn.system_utterance = "What do you think?";
    turn.user_utterance = text;
    return turn;
  };
  for (SourceMode mode : {SourceMode::kText, SourceMode::kAsr}) {
    for (const auto& example : testing::LoadRuleExamples()) {
      const MatchResult result = LabelTurn(turn_of(example.utterance), rules, mode);
      const bool good = result.label == Label::kDisengaged && result.CitesGroup(example.group);
      ok += good;
      ++total;
      if (!good && first_miss.empty()) first_miss = example.utterance;
    }
    for (const auto& text : testing::LoadEngagedExamples()) {
      const bool good = LabelTurn(turn_of(text), rules, mode).label == Label::kEngaged;
      ok += good;
      ++total;
      if (!good && first_miss.empty()) first_miss = text;
    }
  }
  std::string detail = fmt::format("{}/{} utterances labeled as expected (text and asr modes)",
                                   ok, total);
  if (!first_miss.empty()) detail += "; first miss: \"" + first_miss + "\"";
  return {ok == total, detail};
}

PipelineConfig SyntheticConfig() {
  const std::string path =
      std::string(HERALD_TEST_DATA) + "/../../data/configs/synthetic.toml";
  return LoadPipelineConfig(path, [](const std::string&) { return std::nullopt; });
}

struct SeedRun {
  std::uint64_t seed = 0;
  double herald = 0, weak = 0, dev_only = 0;
  double low_start = 0, low_max = 0, low_end = 0, high_end = 0;
};

std::vector<SeedRun> SyntheticRuns() {
  const PipelineConfig config = SyntheticConfig();
  const RuleSet rules = DefaultRuleSet();
  std::vector<SeedRun> runs;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SynthSplits splits = SynthExperiment(config.synth, seed);
    const WorkflowInputs inputs = PrepareInputs(splits, rules, config);
    SeedRun run;
    run.seed = seed;
    run.herald = RunVariant(Variant::kHerald, inputs, config.workflow).report.balanced_accuracy;
    run.weak = RunVariant(Variant::kWeak, inputs, config.workflow).report.balanced_accuracy;
    run.dev_only =
        RunVariant(Variant::kDevOnly, inputs, config.workflow).report.balanced_accuracy;

    const DuplicatedDataset duplicated = DuplicateAllLabels(inputs.weak);
    const ShapleyScores scores = ValueDuplicated(inputs, duplicated, config.workflow);
    const LabeledFeatures points = WeakFeatures(inputs.weak, inputs.train_embeddings);
    const std::vector<double> weak_scores =
        WeakCopyScores(inputs.weak, duplicated, scores.values);
    CurveConfig curve{.k = config.workflow.valuation.k,
                      .step = config.curve.step,
                      .max_removed = config.curve.max_removed,
                      .seed = seed};
    const RemovalCurve low =
        ComputeRemovalCurve(points.features, points.labels, weak_scores, inputs.test.features,
                            inputs.test.labels, RemovalStrategy::kLowFirst, curve);
    const RemovalCurve high =
        ComputeRemovalCurve(points.features, points.labels, weak_scores, inputs.test.features,
                            inputs.test.labels, RemovalStrategy::kHighFirst, curve);
    run.low_start = low.points.front().balanced_accuracy;
    run.low_end = low.points.back().balanced_accuracy;
    for (const CurvePoint& p : low.points) run.low_max = std::max(run.low_max, p.balanced_accuracy);
    run.high_end = high.points.back().balanced_accuracy;
    runs.push_back(run);
  }
  return runs;
}

Verdict DenoisingBenefit(const std::vector<SeedRun>& runs) {
  int beats_weak = 0, ordered = 0;
  std::string margins;
  for (const SeedRun& run : runs) {
    beats_weak += run.herald > run.weak;
    ordered += run.herald > run.weak && run.weak > run.dev_only;
    margins += fmt::format("{}seed {}: herald {:.4f} weak {:.4f} dev-only {:.4f} (margin {:+.4f})",
                           margins.empty() ? "" : "; ", run.seed, run.herald, run.weak,
                           run.dev_only, run.herald - run.weak);
  }
  return {beats_weak == 5 && ordered >= 4,
          fmt::format("herald > weak on {}/5 seeds (need 5), herald > weak > dev-only on {}/5 "
                      "(need 4). {}",
                      beats_weak, ordered, margins)};
}

Verdict CurveShape(const std::vector<SeedRun>& runs) {
  int good = 0;
  std::string detail;
  for (const SeedRun& run : runs) {
    const bool ok = run.low_max >= run.low_start && run.high_end <= run.low_end;
    good += ok;
    detail += fmt::format("{}seed {}: low start {:.4f} max {:.4f} end {:.4f}, high end {:.4f}",
                          detail.empty() ? "" : "; ", run.seed, run.low_start, run.low_max,
                          run.low_end, run.high_end);
  }
  return {good == 5, fmt::format("{}/5 seeds hold both conditions. {}", good, detail)};
}

Verdict GradientCheck() {
  std::mt19937_64 rng(50);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t dim = 1 + rng() % 8;
    const std::size_t n = 2 + rng() % 30;
    const FeatureMatrix features = testing::RandomMatrix(rng, n, dim);
    const auto labels = testing::RandomLabels(rng, n);
    const LinearHead head = testing::RandomHead(rng, dim);
    worst = std::max(worst, testing::MaxGradientRelativeError(head, features, labels, 1e-3));
  }
  return {worst <= 1e-4,
          fmt::format("50 instances, max relative error {:.3g} (limit 1e-4)", worst)};
}

Verdict MetricUnits() {
  const double bacc = BalancedAccuracy({.tp = 5, .fp = 10, .tn = 90, .fn = 5});
  const double f2 = FBeta({.tp = 1, .fp = 1, .tn = 5, .fn = 0}, 2.0);
  const double constant = BalancedAccuracy({.tp = 0, .fp = 0, .tn = 95, .fn = 5});
  const bool ok = std::abs(bacc - 0.7) <= 1e-12 && std::abs(f2 - 5.0 / 6.0) <= 1e-12 &&
                  constant == 0.5;
  return {ok, fmt::format("bACC {:.17g} (want 0.7), F2 {:.17g} (want 0.8333...), "
                          "constant predictor bACC {} (want 0.5)",
                          bacc, f2, constant)};
}

Verdict ScaleAndDeterminism() {
  PipelineConfig config = SyntheticConfig();
  config.synth.train_dialogs = 2000;  // 10,000 turns, 20,000 entries.
  config.synth.dev_dialogs = 100;     // 500 dev points.
  config.synth.test_dialogs = 1;
  config.workflow.denoise.upsample_dev = false;
  const SynthSplits splits = SynthExperiment(config.synth, 1);
  const WorkflowInputs inputs = PrepareInputs(splits, DefaultRuleSet(), config);
  const DuplicatedDataset duplicated = DuplicateAllLabels(inputs.weak);

  config.workflow.valuation.threads = 1;
  auto start = Clock::now();
  const ShapleyScores serial = ValueDuplicated(inputs, duplicated, config.workflow);
  const double serial_seconds = Seconds(start);

  config.workflow.valuation.threads = 4;
  start = Clock::now();
  const ShapleyScores parallel = ValueDuplicated(inputs, duplicated, config.workflow);
  const double parallel_seconds = Seconds(start);

  const bool identical = serial.values == parallel.values;
  const bool ok = duplicated.size() == 20000 && serial.dev_count == 500 &&
                  serial_seconds < 60.0 && identical;
  return {ok, fmt::format("{} entries x {} dev points, K={}: single-threaded {:.2f} s "
                          "(limit 60 s), 4 threads {:.2f} s, bit-identical: {}",
                          duplicated.size(), serial.dev_count, config.workflow.valuation.k,
                          serial_seconds, parallel_seconds, identical ? "yes" : "no")};
}

template <typename T, typename Write, typename Parse>
bool ByteRoundTrip(const T& value, Write write, Parse parse) {
  std::ostringstream first;
  write(value, first);
  std::istringstream in(first.str());
  const T back = parse(in);
  std::ostringstream second;
  write(back, second);
  return first.str() == second.str() && !first.str().empty();
}

Verdict FormatRoundTrips() {
  SynthStageConfig synth;
  synth.base.noise_rate = 0.2;
  synth.train_dialogs = 40;
  const SynthSplits splits = SynthExperiment(synth, 1);
  const Corpus& corpus = splits.train;
  const EmbeddingMatrix embeddings = EmbedCorpusBuiltin(corpus, {});
  const WeakLabelMap weak = ToWeakLabels(LabelCorpus(corpus, DefaultRuleSet()));
  const DuplicatedDataset duplicated = DuplicateAllLabels(weak);
  std::vector<ScoreRecord> records;
  std::vector<double> scores;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal(0.0, 0.01);
  for (const DuplicatedEntry& entry : duplicated) {
    scores.push_back(normal(rng));
    records.push_back({entry.key, entry.label, scores.back()});
  }
  const CleanDataset clean = Denoise(duplicated, scores, {});

  std::vector<std::string> failures;
  const std::string hemb = EncodeHemb(embeddings);
  if (EncodeHemb(DecodeHemb(hemb)) != hemb) failures.push_back("hemb");
  if (!ByteRoundTrip(
          corpus, [](const Corpus& c, std::ostream& out) { WriteCorpus(c, out); },
          [](std::istream& in) { return ParseCorpus(in, CorpusRole::kTrain); })) {
    failures.push_back("corpus");
  }
  if (!ByteRoundTrip(
          weak,
          [&](const WeakLabelMap& w, std::ostream& out) { SerializeLabels(w, corpus, out); },
          [](std::istream& in) { return ParseLabels(in); })) {
    failures.push_back("labels");
  }
  if (!ByteRoundTrip(
          records,
          [](const std::vector<ScoreRecord>& r, std::ostream& out) { WriteScores(r, out); },
          [](std::istream& in) { return ParseScores(in); })) {
    failures.push_back("scores");
  }
  if (!ByteRoundTrip(
          clean, [](const CleanDataset& c, std::ostream& out) { WriteClean(c, out); },
          [](std::istream& in) { return ParseClean(in); })) {
    failures.push_back("clean");
  }

  // Corrupted headers must fail with a message naming the defect.
  std::string bad_magic = hemb;
  bad_magic.replace(0, 4, "XXXX");
  std::string bad_version = hemb;
  bad_version[4] = 9;
  const std::pair<std::string, std::string> corruptions[] = {
      {bad_magic, "bad HEMB magic"},
      {bad_version, "unsupported HEMB version"},
      {hemb.substr(0, 9), "truncated HEMB header"},
      {hemb.substr(0, 100), "truncated HEMB payload"},
  };
  int named = 0;
  for (const auto& [bytes, expected] : corruptions) {
    try {
      DecodeHemb(bytes);
    } catch (const Error& e) {
      named += e.kind() == ErrorKind::kDataValidation &&
               std::string(e.what()).find(expected) != std::string::npos;
    }
  }
  std::string detail = fmt::format(
      "hemb, corpus, labels, scores, clean round-trips: {}; corrupted headers rejected by "
      "name: {}/4",
      failures.empty() ? "all byte-exact" : "FAILED " + fmt::format("{}", failures.size()),
      named);
  for (const auto& f : failures) detail += " [" + f + "]";
  return {failures.empty() && named == 4, detail};
}

}  // namespace
}  // namespace herald

int main() {
  using namespace herald;
  spdlog::set_level(spdlog::level::err);
  struct Criterion {
    int id;
    const char* name;
    std::function<Verdict()> check;
  };
  std::vector<SeedRun> runs;
  auto synthetic = [&]() -> const std::vector<SeedRun>& {
    if (runs.empty()) runs = SyntheticRuns();
    return runs;
  };
  const Criterion criteria[] = {
      {1, "Shapley oracle equivalence", OracleEquivalence},
      {2, "Efficiency axiom", Efficiency},
      {3, "Multi-dev averaging", MultiDevAveraging},
      {4, "Heuristics fidelity", HeuristicsFidelity},
      {5, "Denoising benefit", [&] { return DenoisingBenefit(synthetic()); }},
      {6, "Removal-curve shape", [&] { return CurveShape(synthetic()); }},
      {7, "Gradient check", GradientCheck},
      {8, "Metric units", MetricUnits},
      {9, "Scale and determinism", ScaleAndDeterminism},
      {10, "Format round-trips", FormatRoundTrips},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Verdict verdict;
    try {
      verdict = c.check();
    } catch (const std::exception& e) {
      verdict = {false, std::string("threw: ") + e.what()};
    }
    failed += !verdict.pass;
    std::printf("[%s] %2d %s: %s\n", verdict.pass ? "PASS" : "FAIL", c.id, c.name,
                verdict.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/10 criteria passed\n", 10 - failed);
  return failed == 0 ? 0 : 1;
}

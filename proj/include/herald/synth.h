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


// Synthetic gold-labeled dialog corpora.
//
// User turns are drawn from template pools whose relation to the shipped
// rule program is fixed by construction:
//   engaged         gold 0, no rule fires
//   hard negative   gold 0, some rule fires anyway
//   covered         gold 1, a rule of the chosen group fires
//   paraphrase      gold 1, no rule fires
// Each turn also records a "noisy_label" (gold flipped with probability
// noise_rate) and its pool under "synth_category" in the turn's extra fields.

#ifndef HERALD_SYNTH_H_
#define HERALD_SYNTH_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "herald/corpus.h"

namespace herald {

struct SynthConfig {
  int n_dialogs = 100;
  int turns_per_dialog = 5;
  double disengaged_rate = 0.2;
  double noise_rate = 0.0;
  // Share of disengaged turns phrased so that no rule fires.
  double paraphrase_rate = 0.06;
  // Share of engaged turns phrased so that some rule fires.
  double hard_negative_rate = 0.02;
  // Relative frequency of the four rule groups among covered turns.
  std::array<double, 4> group_weights = {0.2, 0.25, 0.25, 0.3};
  std::uint64_t seed = 1;
  SourceMode source_mode = SourceMode::kText;
  std::string id_prefix = "syn";
  CorpusRole role = CorpusRole::kTrain;
};

// Throws InvalidArgument on counts < 1 or rates outside [0, 1].
Corpus SynthCorpus(const SynthConfig& config);

enum class SynthCategory { kEngaged, kHardNegative, kCovered, kParaphrase };

std::string_view ToString(SynthCategory category);

// Raw template pools, with "{slot}" placeholders.
struct TemplatePool {
  SynthCategory category;
  int group = 0;  // Rule group for kCovered pools, else 0.
  std::span<const std::string_view> templates;
};
std::vector<TemplatePool> TemplatePools();

// Every filling of `text` (cartesian over slot values).
std::vector<std::string> ExpandTemplate(std::string_view text);

// Label read from a turn's "noisy_label" extra field, if present.
std::optional<Label> NoisyLabel(const Turn& turn);

}  // namespace herald

#endif  // HERALD_SYNTH_H_

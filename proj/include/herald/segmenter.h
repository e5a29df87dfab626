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

#ifndef HERALD_SEGMENTER_H_
#define HERALD_SEGMENTER_H_

#include <string>
#include <string_view>
#include <vector>

#include "herald/corpus.h"

namespace herald {

// Lowercases ASCII, collapses whitespace runs to one space and trims.
// Punctuation is kept.
std::string Normalize(std::string_view text);

// Whitespace-delimited tokens of already-normalized text.
std::vector<std::string_view> SplitTokens(std::string_view normalized);

struct SegmenterConfig {
  // ASR transcripts are split before these words when both sides keep at
  // least `min_tokens` tokens.
  std::vector<std::string> markers = {"but",     "and",    "so",  "because",
                                      "let's",   "anyway", "well"};
  int min_tokens = 2;
};

struct Segment {
  std::string text;  // Normalized.
  std::string raw;   // Exact slice of the input; slices tile the utterance.
  int position = 0;
  bool is_last = false;
};

// Splits a user utterance into semantic segments.
//
// Text mode breaks after runs of sentence-final punctuation (. ? !) that are
// followed by whitespace or the end of input; the punctuation stays with its
// segment. ASR mode does the same and then splits unpunctuated stretches in
// front of discourse markers. Throws InvalidArgument on an empty utterance.
std::vector<Segment> SegmentText(std::string_view utterance, SourceMode mode,
                                 const SegmenterConfig& config = {});

}  // namespace herald

#endif  // HERALD_SEGMENTER_H_

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

#include "herald/segmenter.h"

#include <algorithm>
#include <cstddef>

#include "herald/error.h"

namespace herald {
namespace {

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool IsTerminal(char c) { return c == '.' || c == '?' || c == '!'; }

char AsciiLower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

struct Span {
  std::size_t begin;
  std::size_t end;
};

// Cuts after punctuation runs that end a sentence; trailing whitespace stays
// with the sentence it follows.
std::vector<Span> SentenceSpans(std::string_view text) {
  std::vector<Span> spans;
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!IsTerminal(text[i])) {
      ++i;
      continue;
    }
    std::size_t run_end = i;
    while (run_end < text.size() && IsTerminal(text[run_end])) ++run_end;
    if (run_end < text.size() && !IsSpace(text[run_end])) {
      i = run_end;  // "3.5", "e.g.x": not a boundary.
      continue;
    }
    std::size_t cut = run_end;
    while (cut < text.size() && IsSpace(text[cut])) ++cut;
    if (cut < text.size()) {
      spans.push_back({start, cut});
      start = cut;
    }
    i = cut;
  }
  spans.push_back({start, text.size()});
  return spans;
}

std::string MarkerForm(std::string_view token) {
  std::string form;
  form.reserve(token.size());
  for (char c : token) form.push_back(AsciiLower(c));
  while (!form.empty() &&
         (form.back() == ',' || form.back() == ';' || form.back() == ':')) {
    form.pop_back();
  }
  return form;
}

// Splits one sentence span in front of discourse markers.
void SplitOnMarkers(std::string_view text, Span span,
                    const SegmenterConfig& config, std::vector<Span>& out) {
  std::vector<std::size_t> token_starts;
  std::vector<std::string> forms;
  std::size_t i = span.begin;
  while (i < span.end) {
    while (i < span.end && IsSpace(text[i])) ++i;
    if (i >= span.end) break;
    std::size_t j = i;
    while (j < span.end && !IsSpace(text[j])) ++j;
    token_starts.push_back(i);
    forms.push_back(MarkerForm(text.substr(i, j - i)));
    i = j;
  }

  const int min_tokens = std::max(1, config.min_tokens);
  const int count = static_cast<int>(token_starts.size());
  std::size_t piece_begin = span.begin;
  int piece_first_token = 0;
  for (int t = 1; t < count; ++t) {
    const bool is_marker = std::find(config.markers.begin(), config.markers.end(),
                                     forms[t]) != config.markers.end();
    if (!is_marker) continue;
    if (t - piece_first_token < min_tokens || count - t < min_tokens) continue;
    out.push_back({piece_begin, token_starts[t]});
    piece_begin = token_starts[t];
    piece_first_token = t;
  }
  out.push_back({piece_begin, span.end});
}

}  // namespace

std::string Normalize(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (IsSpace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(AsciiLower(c));
  }
  return out;
}

std::vector<std::string_view> SplitTokens(std::string_view normalized) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < normalized.size()) {
    while (i < normalized.size() && IsSpace(normalized[i])) ++i;
    std::size_t j = i;
    while (j < normalized.size() && !IsSpace(normalized[j])) ++j;
    if (j > i) tokens.push_back(normalized.substr(i, j - i));
    i = j;
  }
  return tokens;
}

std::vector<Segment> SegmentText(std::string_view utterance, SourceMode mode,
                                 const SegmenterConfig& config) {
  if (Normalize(utterance).empty()) {
    throw InvalidArgument("cannot segment an empty utterance");
  }
  std::vector<Span> spans;
  for (const Span& sentence : SentenceSpans(utterance)) {
    if (mode == SourceMode::kAsr) {
      SplitOnMarkers(utterance, sentence, config, spans);
    } else {
      spans.push_back(sentence);
    }
  }

  std::vector<Segment> segments;
  segments.reserve(spans.size());
  for (const Span& span : spans) {
    Segment segment;
    segment.raw = std::string(utterance.substr(span.begin, span.end - span.begin));
    segment.text = Normalize(segment.raw);
    segment.position = static_cast<int>(segments.size());
    segments.push_back(std::move(segment));
  }
  segments.back().is_last = true;
  return segments;
}

}  // namespace herald

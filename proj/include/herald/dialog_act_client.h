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

// Client for an external dialog-act tagger.
//
// Protocol: POST {"utterances": ["...", ...]} and expect 200 with
// {"tags": [["neg_answer"], ...]}, one tag list per utterance. Any transport
// error, timeout, non-200 status or malformed body makes the caller fall back
// to regex-only labeling.

#ifndef HERALD_DIALOG_ACT_CLIENT_H_
#define HERALD_DIALOG_ACT_CLIENT_H_

#include <optional>
#include <string>
#include <vector>

#include "herald/corpus.h"

namespace herald {

struct DialogActClientConfig {
  std::string url;  // e.g. "http://localhost:8080/tag"
  double timeout_seconds = 5.0;
  std::size_t batch_size = 256;
};

using TagLists = std::vector<std::vector<std::string>>;

// Returns one tag list per utterance, or nullopt (with a logged warning).
std::optional<TagLists> FetchDialogActs(const DialogActClientConfig& config,
                                        const std::vector<std::string>& utterances);

// Attaches turn-level tags to every turn that has none. Returns false when
// the tagger was unavailable and the corpus was left unchanged.
bool AttachDialogActs(Corpus& corpus, const DialogActClientConfig& config);

}  // namespace herald

#endif  // HERALD_DIALOG_ACT_CLIENT_H_

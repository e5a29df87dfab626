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

#include "herald/dialog_act_client.h"

#include <algorithm>
#include <chrono>

#include "httplib.h"
#include "nlohmann/json.hpp"
#include "spdlog/spdlog.h"

namespace herald {
namespace {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

std::optional<Endpoint> SplitUrl(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) return std::nullopt;
  const auto path_begin = url.find('/', scheme_end + 3);
  if (path_begin == std::string::npos) return Endpoint{url, "/"};
  return Endpoint{url.substr(0, path_begin), url.substr(path_begin)};
}

std::optional<TagLists> FetchBatch(httplib::Client& client,
                                   const std::string& path,
                                   const std::vector<std::string>& utterances) {
  const nlohmann::json request = {{"utterances", utterances}};
  auto response = client.Post(path, request.dump(), "application/json");
  if (!response) {
    spdlog::warn("dialog-act tagger unreachable ({}); using regexes only",
                 httplib::to_string(response.error()));
    return std::nullopt;
  }
  if (response->status != 200) {
    spdlog::warn("dialog-act tagger returned HTTP {}; using regexes only",
                 response->status);
    return std::nullopt;
  }
  try {
    const auto body = nlohmann::json::parse(response->body);
    auto tags = body.at("tags").get<TagLists>();
    if (tags.size() != utterances.size()) {
      spdlog::warn("dialog-act tagger returned {} tag lists for {} utterances; "
                   "using regexes only",
                   tags.size(), utterances.size());
      return std::nullopt;
    }
    return tags;
  } catch (const nlohmann::json::exception& e) {
    spdlog::warn("malformed dialog-act response ({}); using regexes only",
                 e.what());
    return std::nullopt;
  }
}

}  // namespace

std::optional<TagLists> FetchDialogActs(const DialogActClientConfig& config,
                                        const std::vector<std::string>& utterances) {
  const auto endpoint = SplitUrl(config.url);
  if (!endpoint) {
    spdlog::warn("bad dialog-act tagger URL \"{}\"; using regexes only",
                 config.url);
    return std::nullopt;
  }
  httplib::Client client(endpoint->origin);
  const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
      std::chrono::duration<double>(config.timeout_seconds));
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  TagLists all;
  all.reserve(utterances.size());
  const std::size_t batch = std::max<std::size_t>(1, config.batch_size);
  for (std::size_t begin = 0; begin < utterances.size(); begin += batch) {
    const std::size_t end = std::min(utterances.size(), begin + batch);
    const std::vector<std::string> slice(utterances.begin() + begin,
                                         utterances.begin() + end);
    auto tags = FetchBatch(client, endpoint->path, slice);
    if (!tags) return std::nullopt;
    for (auto& list : *tags) all.push_back(std::move(list));
  }
  return all;
}

bool AttachDialogActs(Corpus& corpus, const DialogActClientConfig& config) {
  std::vector<std::string> utterances;
  std::vector<Turn*> targets;
  for (Dialog& dialog : corpus.dialogs) {
    for (Turn& turn : dialog.turns) {
      if (turn.dialog_acts) continue;
      utterances.push_back(turn.user_utterance);
      targets.push_back(&turn);
    }
  }
  if (targets.empty()) return true;
  auto tags = FetchDialogActs(config, utterances);
  if (!tags) return false;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    targets[i]->dialog_acts = DialogActs{false, {std::move((*tags)[i])}};
  }
  return true;
}

}  // namespace herald

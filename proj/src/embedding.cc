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

#include "herald/embedding.h"

#include <bit>
#include <cmath>

#include "herald/error.h"
#include "herald/file_util.h"
#include "herald/segmenter.h"
#include "nlohmann/json.hpp"

namespace herald {
namespace {

constexpr std::string_view kMagic = "HEMB";
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 16;

void PutU32(std::string& out, std::uint32_t value) {
  for (int shift = 0; shift < 32; shift += 8) {
    out.push_back(static_cast<char>((value >> shift) & 0xffu));
  }
}

std::uint32_t GetU32(std::string_view bytes, std::size_t offset) {
  std::uint32_t value = 0;
  for (int i = 0; i < 4; ++i) {
    value |= static_cast<std::uint32_t>(
                 static_cast<unsigned char>(bytes[offset + i]))
             << (8 * i);
  }
  return value;
}

void CheckFinite(const FeatureMatrix& features) {
  const auto& values = features.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw DataError("non-finite value at row " +
                      std::to_string(i / features.dim()) + ", column " +
                      std::to_string(i % features.dim()));
    }
  }
}

bool IsWordByte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '\'' ||
         u >= 0x80;
}

void AddGrams(std::string_view utterance, std::size_t buckets,
              std::vector<double>& counts) {
  const std::vector<std::string> tokens = LexicalTokens(Normalize(utterance));
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    counts[Fnv1a64(tokens[i]) % buckets] += 1.0;
    if (i + 1 < tokens.size()) {
      const std::string bigram = tokens[i] + " " + tokens[i + 1];
      counts[Fnv1a64(bigram) % buckets] += 1.0;
    }
  }
}

// Scales a namespace's term counts to Euclidean norm `weight`, so the
// user/context balance does not depend on utterance length.
void Place(const std::vector<double>& counts, double weight, std::size_t offset,
           std::vector<double>& out) {
  double norm = 0.0;
  for (double c : counts) norm += c * c;
  if (norm == 0.0) return;
  const double scale = weight / std::sqrt(norm);
  for (std::size_t i = 0; i < counts.size(); ++i) out[offset + i] = counts[i] * scale;
}

}  // namespace

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t dim)
    : rows_(rows), dim_(dim), values_(rows * dim, 0.0f) {}

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t dim,
                             std::vector<float> values)
    : rows_(rows), dim_(dim), values_(std::move(values)) {
  if (values_.size() != rows * dim) {
    throw InvalidArgument("feature matrix expects " +
                          std::to_string(rows * dim) + " values, got " +
                          std::to_string(values_.size()));
  }
}

FeatureMatrix FeatureMatrix::Gather(std::span<const std::size_t> indices) const {
  FeatureMatrix out(indices.size(), dim_);
  for (std::size_t r = 0; r < indices.size(); ++r) {
    if (indices[r] >= rows_) throw InvalidArgument("row index out of range");
    const auto src = Row(indices[r]);
    std::copy(src.begin(), src.end(), out.MutableRow(r).begin());
  }
  return out;
}

EmbeddingMatrix::EmbeddingMatrix(std::vector<TurnKey> keys,
                                 FeatureMatrix features)
    : keys_(std::move(keys)), features_(std::move(features)) {
  if (keys_.size() != features_.rows()) {
    throw DataError("key count " + std::to_string(keys_.size()) +
                    " != row count " + std::to_string(features_.rows()));
  }
  if (features_.dim() == 0) throw DataError("embedding dim must be positive");
  CheckFinite(features_);
  position_.reserve(keys_.size());
  for (std::size_t i = 0; i < keys_.size(); ++i) {
    if (!position_.emplace(keys_[i].ToString(), i).second) {
      throw DataError("duplicate embedding key " + keys_[i].ToString());
    }
  }
}

std::optional<std::size_t> EmbeddingMatrix::Find(const TurnKey& key) const {
  auto it = position_.find(key.ToString());
  if (it == position_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> EmbeddingMatrix::IndicesOf(
    std::span<const TurnKey> keys) const {
  std::vector<std::size_t> indices;
  indices.reserve(keys.size());
  for (const TurnKey& key : keys) {
    auto index = Find(key);
    if (!index) throw DataError("no embedding for turn " + key.ToString());
    indices.push_back(*index);
  }
  return indices;
}

bool EmbeddingMatrix::operator==(const EmbeddingMatrix& other) const {
  if (keys_ != other.keys_ || dim() != other.dim()) return false;
  const auto& a = features_.values();
  const auto& b = other.features_.values();
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::bit_cast<std::uint32_t>(a[i]) != std::bit_cast<std::uint32_t>(b[i])) {
      return false;
    }
  }
  return true;
}

std::string EncodeHemb(const EmbeddingMatrix& matrix) {
  std::string out;
  out.reserve(kHeaderBytes + 4 * matrix.features().values().size());
  out.append(kMagic);
  PutU32(out, kVersion);
  PutU32(out, static_cast<std::uint32_t>(matrix.rows()));
  PutU32(out, static_cast<std::uint32_t>(matrix.dim()));
  for (float value : matrix.features().values()) {
    PutU32(out, std::bit_cast<std::uint32_t>(value));
  }
  nlohmann::json keys = nlohmann::json::array();
  for (const TurnKey& key : matrix.keys()) keys.push_back(key.ToString());
  out.append(keys.dump());
  return out;
}

EmbeddingMatrix DecodeHemb(std::string_view bytes) {
  if (bytes.size() < kHeaderBytes) {
    throw DataError("truncated HEMB header: expected " +
                    std::to_string(kHeaderBytes) + " bytes, got " +
                    std::to_string(bytes.size()));
  }
  if (bytes.substr(0, 4) != kMagic) {
    throw DataError("bad HEMB magic \"" + std::string(bytes.substr(0, 4)) +
                    "\" (expected \"HEMB\")");
  }
  const std::uint32_t version = GetU32(bytes, 4);
  if (version != kVersion) {
    throw DataError("unsupported HEMB version " + std::to_string(version) +
                    " (expected 1)");
  }
  const std::uint64_t count = GetU32(bytes, 8);
  const std::uint64_t dim = GetU32(bytes, 12);
  if (dim == 0) throw DataError("HEMB dim must be positive");
  const std::uint64_t payload = count * dim * 4;
  const std::uint64_t available = bytes.size() - kHeaderBytes;
  if (available < payload) {
    throw DataError("truncated HEMB payload: expected " +
                    std::to_string(payload) + " bytes of float data, got " +
                    std::to_string(available));
  }
  std::vector<float> values(count * dim);
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = std::bit_cast<float>(GetU32(bytes, kHeaderBytes + 4 * i));
  }

  nlohmann::json keys_json;
  try {
    keys_json = nlohmann::json::parse(bytes.substr(kHeaderBytes + payload));
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string("malformed HEMB key list: ") + e.what());
  }
  if (!keys_json.is_array()) throw DataError("HEMB key list must be a JSON array");
  if (keys_json.size() != count) {
    throw DataError("HEMB key count " + std::to_string(keys_json.size()) +
                    " != row count " + std::to_string(count));
  }
  std::vector<TurnKey> keys;
  keys.reserve(count);
  for (const auto& key : keys_json) {
    if (!key.is_string()) throw DataError("HEMB keys must be strings");
    keys.push_back(TurnKey::Parse(key.get<std::string>()));
  }
  return EmbeddingMatrix(std::move(keys),
                         FeatureMatrix(count, dim, std::move(values)));
}

void SaveEmbeddings(const EmbeddingMatrix& matrix,
                    const std::filesystem::path& path) {
  WriteFileAtomic(path, EncodeHemb(matrix));
}

EmbeddingMatrix LoadEmbeddings(const std::filesystem::path& path) {
  try {
    return DecodeHemb(ReadFile(path));
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

void ValidateKeys(const EmbeddingMatrix& matrix, const Corpus& corpus,
                  bool require_all) {
  const CorpusIndex index(corpus);
  for (const TurnKey& key : matrix.keys()) {
    if (!index.Contains(key)) {
      throw DataError("embedding key " + key.ToString() +
                      " does not name a corpus turn");
    }
  }
  if (require_all) {
    for (const TurnKey& key : index.Keys()) {
      if (!matrix.Find(key)) {
        throw DataError("no embedding for turn " + key.ToString());
      }
    }
  }
}

std::uint64_t Fnv1a64(std::string_view data) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (char c : data) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::vector<std::string> LexicalTokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && !IsWordByte(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && IsWordByte(text[j])) ++j;
    if (j > i) tokens.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return tokens;
}

std::vector<float> EmbedTurn(const Dialog& dialog, int turn_index,
                             const EmbedderConfig& config) {
  if (config.dim < 2) throw InvalidArgument("embedder dim must be >= 2");
  const auto dim = static_cast<std::size_t>(config.dim);
  const std::size_t user_buckets = (dim + 1) / 2;
  const std::size_t context_buckets = dim - user_buckets;

  const std::vector<std::string> window =
      ContextWindow(dialog, turn_index, config.context_depth);
  // The window ends with the current user utterance.
  std::vector<double> user(user_buckets, 0.0);
  std::vector<double> context(context_buckets, 0.0);
  for (std::size_t u = 0; u + 1 < window.size(); ++u) {
    AddGrams(window[u], context_buckets, context);
  }
  AddGrams(window.back(), user_buckets, user);
  std::vector<double> accum(dim, 0.0);
  Place(user, config.user_weight, 0, accum);
  Place(context, config.context_weight, user_buckets, accum);

  if (config.l2_normalize) {
    double norm = 0.0;
    for (double v : accum) norm += v * v;
    norm = std::sqrt(norm);
    if (norm > 0.0) {
      for (double& v : accum) v /= norm;
    }
  }
  return std::vector<float>(accum.begin(), accum.end());
}

EmbeddingMatrix EmbedCorpusBuiltin(const Corpus& corpus,
                                   const EmbedderConfig& config) {
  if (config.dim < 2) throw InvalidArgument("embedder dim must be >= 2");
  if (config.context_depth < 0) {
    throw InvalidArgument("context depth must be >= 0");
  }
  std::vector<TurnKey> keys;
  std::vector<float> values;
  keys.reserve(corpus.turn_count());
  values.reserve(corpus.turn_count() * static_cast<std::size_t>(config.dim));
  for (const Dialog& dialog : corpus.dialogs) {
    for (const Turn& turn : dialog.turns) {
      keys.push_back(TurnKey{dialog.dialog_id, turn.index});
      const std::vector<float> row = EmbedTurn(dialog, turn.index, config);
      values.insert(values.end(), row.begin(), row.end());
    }
  }
  const std::size_t rows = keys.size();
  return EmbeddingMatrix(
      std::move(keys),
      FeatureMatrix(rows, static_cast<std::size_t>(config.dim), std::move(values)));
}

}  // namespace herald

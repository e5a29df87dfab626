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

// Per-turn feature vectors and the HEMB file format.
//
// HEMB layout (all integers little-endian):
//   bytes 0-3   magic "HEMB"
//   u32         version (1)
//   u32         row count
//   u32         dim
//   count*dim   float32, row-major
//   trailing    UTF-8 JSON array of `count` turn keys ("dialog#index")

#ifndef HERALD_EMBEDDING_H_
#define HERALD_EMBEDDING_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "herald/corpus.h"

namespace herald {

// Dense row-major float matrix. Rows carry no identity; duplicated training
// points may appear more than once.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::size_t dim);
  // Throws InvalidArgument when values.size() != rows * dim.
  FeatureMatrix(std::size_t rows, std::size_t dim, std::vector<float> values);

  std::size_t rows() const { return rows_; }
  std::size_t dim() const { return dim_; }
  bool empty() const { return rows_ == 0; }

  std::span<const float> Row(std::size_t i) const {
    return {values_.data() + i * dim_, dim_};
  }
  std::span<float> MutableRow(std::size_t i) {
    return {values_.data() + i * dim_, dim_};
  }
  const std::vector<float>& values() const { return values_; }

  // Rows in the given order; indices may repeat.
  FeatureMatrix Gather(std::span<const std::size_t> indices) const;

 private:
  std::size_t rows_ = 0;
  std::size_t dim_ = 0;
  std::vector<float> values_;
};

// Feature matrix whose rows are identified by unique turn keys.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  // Validates: keys unique, |keys| == rows, dim > 0, all values finite.
  EmbeddingMatrix(std::vector<TurnKey> keys, FeatureMatrix features);

  std::size_t rows() const { return features_.rows(); }
  std::size_t dim() const { return features_.dim(); }
  const std::vector<TurnKey>& keys() const { return keys_; }
  const FeatureMatrix& features() const { return features_; }
  std::span<const float> Row(std::size_t i) const { return features_.Row(i); }

  std::optional<std::size_t> Find(const TurnKey& key) const;
  // Throws DataError naming the first key without a row.
  std::vector<std::size_t> IndicesOf(std::span<const TurnKey> keys) const;

  bool operator==(const EmbeddingMatrix& other) const;

 private:
  std::vector<TurnKey> keys_;
  FeatureMatrix features_;
  std::unordered_map<std::string, std::size_t> position_;
};

std::string EncodeHemb(const EmbeddingMatrix& matrix);
// Throws DataError: bad magic, version mismatch, truncated header or
// payload, key count != row count, non-finite floats, malformed key list.
EmbeddingMatrix DecodeHemb(std::string_view bytes);

void SaveEmbeddings(const EmbeddingMatrix& matrix,
                    const std::filesystem::path& path);
EmbeddingMatrix LoadEmbeddings(const std::filesystem::path& path);

// Every matrix key must resolve in `corpus`; with `require_all`, every corpus
// turn must also have a row. Throws DataError.
void ValidateKeys(const EmbeddingMatrix& matrix, const Corpus& corpus,
                  bool require_all);

struct EmbedderConfig {
  int dim = 512;
  int context_depth = 1;
  double user_weight = 1.0;
  double context_weight = 0.5;
  bool l2_normalize = true;
};

// 64-bit FNV-1a.
std::uint64_t Fnv1a64(std::string_view data);

// Word tokens of a normalized utterance: runs of ASCII letters, digits and
// apostrophes (non-ASCII bytes count as letters).
std::vector<std::string> LexicalTokens(std::string_view text);

// Hashed bag of unigrams and bigrams over the turn's context window. Tokens
// of the turn's own user utterance hash into the first ceil(dim/2) buckets;
// every other utterance in the window hashes into the remaining buckets.
// Each namespace's counts are scaled to Euclidean norm user_weight or
// context_weight respectively before the optional final normalization.
std::vector<float> EmbedTurn(const Dialog& dialog, int turn_index,
                             const EmbedderConfig& config);
EmbeddingMatrix EmbedCorpusBuiltin(const Corpus& corpus,
                                   const EmbedderConfig& config);

}  // namespace herald

#endif  // HERALD_EMBEDDING_H_

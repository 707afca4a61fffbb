// Copyright 2026 The clusteraug Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CLUSTERAUG_EMBEDDINGS_H_
#define CLUSTERAUG_EMBEDDINGS_H_

#include <cstddef>
#include <istream>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "clusteraug/corpus.h"

namespace clusteraug {

// Static word vectors, immutable once loaded. Components are stored as
// float; all arithmetic on them is done in double.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dimension) : dimension_(dimension) {}

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return words_.size(); }
  bool contains(std::string_view word) const;

  // Empty span when the word is out of vocabulary.
  std::span<const float> Lookup(std::string_view word) const;

  // Returns false if the word already existed (and overwrites it).
  bool Insert(std::string word, std::span<const float> vector);

  const std::vector<std::string>& words() const { return words_; }

 private:
  std::size_t dimension_ = 0;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::string> words_;
  std::vector<float> data_;
};

struct EmbeddingLoadResult {
  EmbeddingTable table;
  std::vector<std::string> warnings;
};

// Reads the word-vector text format: an optional "count dimension" header,
// then "word v1 ... vD" per line. When `vocabulary` is given, other words are
// skipped (but still validated).
EmbeddingLoadResult LoadEmbeddings(
    std::istream& in,
    const std::unordered_set<std::string>* vocabulary = nullptr);

// Designation/tribe/caste markers that precede person names.
struct TitleList {
  std::set<std::string> titles;

  bool contains(const std::string& token) const {
    return titles.count(token) > 0;
  }
};

// One token per line; blank lines and '#' comments are ignored.
TitleList LoadTitleList(std::istream& in);

struct EntityVector {
  std::string surface;
  std::vector<double> vector;
};

// LOC/ORG: mean of the in-vocabulary token vectors. PER: leading titles are
// dropped and the first remaining in-vocabulary token is used; if there is
// none, falls back to the LOC/ORG rule. The result is unit-norm, or nullopt
// when no token is usable.
std::optional<EntityVector> EntityFeatureVector(std::string_view surface,
                                                EntityType type,
                                                const EmbeddingTable& table,
                                                const TitleList& titles);

// Left-to-right accumulation, so Dot(a, b) == Dot(b, a) bit-for-bit.
inline double Dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double Norm(std::span<const double> a);

// Throws on dimension mismatch or a zero vector. Clamped to [-1, 1].
double Cosine(std::span<const double> a, std::span<const double> b);

// Scales to unit length in place. Returns false (and leaves `v` untouched)
// for a zero vector.
bool Normalize(std::vector<double>& v);

}  // namespace clusteraug

#endif  // CLUSTERAUG_EMBEDDINGS_H_

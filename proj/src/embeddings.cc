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

#include "clusteraug/embeddings.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>
#include <utility>

#include "clusteraug/error.h"

namespace clusteraug {

namespace {

std::vector<std::string_view> SplitSpaces(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
    if (end > pos) fields.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return fields;
}

bool ParseSize(std::string_view text, std::size_t& out) {
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

bool ParseFloat(std::string_view text, float& out) {
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size() &&
         std::isfinite(out);
}

void AddScaled(std::vector<double>& acc, std::span<const float> v) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += v[i];
}

}  // namespace

bool EmbeddingTable::contains(std::string_view word) const {
  return index_.find(std::string(word)) != index_.end();
}

std::span<const float> EmbeddingTable::Lookup(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return {};
  return std::span<const float>(data_).subspan(it->second * dimension_,
                                               dimension_);
}

bool EmbeddingTable::Insert(std::string word, std::span<const float> vector) {
  if (vector.size() != dimension_) {
    ThrowInvalid("embedding for '" + word + "' has dimension " +
                 std::to_string(vector.size()) + ", expected " +
                 std::to_string(dimension_));
  }
  auto it = index_.find(word);
  if (it != index_.end()) {
    std::copy(vector.begin(), vector.end(),
              data_.begin() + it->second * dimension_);
    return false;
  }
  index_.emplace(word, words_.size());
  words_.push_back(std::move(word));
  data_.insert(data_.end(), vector.begin(), vector.end());
  return true;
}

EmbeddingLoadResult LoadEmbeddings(
    std::istream& in, const std::unordered_set<std::string>* vocabulary) {
  EmbeddingLoadResult result;
  std::string line;
  std::size_t line_number = 0;
  std::size_t dimension = 0;
  std::size_t declared_count = 0;
  bool have_header = false;
  bool seen_any = false;
  std::size_t rows = 0;
  std::vector<float> values;

  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string_view> fields = SplitSpaces(line);
    if (fields.empty()) continue;

    if (!seen_any) {
      seen_any = true;
      std::size_t count = 0;
      std::size_t dim = 0;
      if (fields.size() == 2 && ParseSize(fields[0], count) &&
          ParseSize(fields[1], dim)) {
        if (dim == 0) ThrowInvalid("embedding header declares dimension 0");
        have_header = true;
        declared_count = count;
        dimension = dim;
        result.table = EmbeddingTable(dimension);
        continue;
      }
    }
    if (dimension == 0) {
      if (fields.size() < 2) {
        ThrowInvalid("line " + std::to_string(line_number) +
                     ": word without vector components");
      }
      dimension = fields.size() - 1;
      result.table = EmbeddingTable(dimension);
    }
    if (fields.size() - 1 != dimension) {
      ThrowInvalid("line " + std::to_string(line_number) + ": " +
                   std::to_string(fields.size() - 1) +
                   " components, expected " + std::to_string(dimension));
    }
    values.resize(dimension);
    for (std::size_t i = 0; i < dimension; ++i) {
      if (!ParseFloat(fields[i + 1], values[i])) {
        ThrowInvalid("line " + std::to_string(line_number) +
                     ": non-numeric component '" +
                     std::string(fields[i + 1]) + "'");
      }
    }
    ++rows;
    std::string word(fields[0]);
    if (vocabulary != nullptr && vocabulary->count(word) == 0) continue;
    if (!result.table.Insert(word, values)) {
      result.warnings.push_back("line " + std::to_string(line_number) +
                                ": duplicate word '" + word +
                                "' overwrites earlier vector");
    }
  }
  if (!seen_any) ThrowInvalid("embedding stream is empty");
  if (have_header && declared_count != rows) {
    result.warnings.push_back("header declares " +
                              std::to_string(declared_count) + " vectors, read " +
                              std::to_string(rows));
  }
  return result;
}

TitleList LoadTitleList(std::istream& in) {
  TitleList list;
  std::string line;
  while (std::getline(in, line)) {
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    for (std::string& token : SplitWhitespace(line)) {
      list.titles.insert(std::move(token));
    }
  }
  return list;
}

double Norm(std::span<const double> a) { return std::sqrt(Dot(a, a)); }

double Cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    ThrowInvalid("cosine: dimension mismatch (" + std::to_string(a.size()) +
                 " vs " + std::to_string(b.size()) + ")");
  }
  const double na = Norm(a);
  const double nb = Norm(b);
  if (na == 0.0 || nb == 0.0) ThrowInvalid("cosine: zero-norm vector");
  return std::clamp(Dot(a, b) / (na * nb), -1.0, 1.0);
}

bool Normalize(std::vector<double>& v) {
  const double norm = Norm(v);
  if (norm == 0.0 || !std::isfinite(norm)) return false;
  for (double& x : v) x /= norm;
  return true;
}

std::optional<EntityVector> EntityFeatureVector(std::string_view surface,
                                                EntityType type,
                                                const EmbeddingTable& table,
                                                const TitleList& titles) {
  const std::vector<std::string> tokens = SplitWhitespace(surface);
  const std::size_t dim = table.dimension();
  EntityVector out;
  out.surface = JoinTokens(tokens);

  if (type == EntityType::kPer) {
    std::size_t first = 0;
    while (first < tokens.size() && titles.contains(tokens[first])) ++first;
    for (std::size_t i = first; i < tokens.size(); ++i) {
      std::span<const float> v = table.Lookup(tokens[i]);
      if (v.empty()) continue;
      out.vector.assign(v.begin(), v.end());
      if (Normalize(out.vector)) return out;
      break;
    }
  }

  std::vector<double> sum(dim, 0.0);
  std::size_t used = 0;
  for (const std::string& token : tokens) {
    std::span<const float> v = table.Lookup(token);
    if (v.empty()) continue;
    AddScaled(sum, v);
    ++used;
  }
  if (used == 0) return std::nullopt;
  for (double& x : sum) x /= static_cast<double>(used);
  if (!Normalize(sum)) return std::nullopt;
  out.vector = std::move(sum);
  return out;
}

}  // namespace clusteraug

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

#ifndef CLUSTERAUG_CLUSTERING_H_
#define CLUSTERAUG_CLUSTERING_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "clusteraug/corpus.h"
#include "clusteraug/embeddings.h"
#include "clusteraug/rng.h"

namespace clusteraug {

inline constexpr int kClusterSchemaVersion = 1;

struct ClusterSpec {
  // Cluster counts for PER, LOC, ORG.
  std::array<std::size_t, kNumEntityTypes> k = {2, 2, 10};
  std::size_t repetitions = 25;
  std::size_t max_iterations = 100;
  std::uint64_t seed = kDefaultSeed;
};

struct ClusterModel {
  EntityType type = EntityType::kPer;
  std::size_t k = 0;
  std::size_t dimension = 0;
  std::vector<double> centroids;  // k rows, unit-norm
  std::map<std::string, std::size_t> members;
  double objective = 0.0;

  std::size_t Assign(std::span<const double> vector) const;
  std::span<const double> centroid(std::size_t id) const {
    return std::span<const double>(centroids).subspan(id * dimension,
                                                      dimension);
  }
};

// Per-type models and cluster dictionaries, plus the full type inventories
// (including surfaces that had no usable vector).
struct ClusterArtifacts {
  std::array<std::optional<ClusterModel>, kNumEntityTypes> models;
  std::array<std::vector<std::set<std::string>>, kNumEntityTypes> dictionary;
  std::array<std::set<std::string>, kNumEntityTypes> unvectorizable;
  TypeInventories inventories;
  std::vector<std::string> warnings;

  const std::optional<ClusterModel>& model(EntityType type) const {
    return models[TypeIndex(type)];
  }
  const std::vector<std::set<std::string>>& clusters(EntityType type) const {
    return dictionary[TypeIndex(type)];
  }
};

ClusterArtifacts BuildClusterDictionaries(const Corpus& corpus,
                                          const EmbeddingTable& table,
                                          const TitleList& titles,
                                          const ClusterSpec& spec);

struct AlignedPool {
  std::vector<std::string> candidates;  // sorted, never contains the source
  std::optional<std::size_t> cluster_id;
  bool fallback = false;  // whole-type inventory was used
};

// Candidate replacements for `source`. With a table, the source's feature
// vector is assigned to its nearest centroid; without one, its stored
// membership is used. Unvectorizable sources fall back to the whole-type
// inventory.
AlignedPool Align(const EntityMention& source,
                  const ClusterArtifacts& artifacts,
                  const EmbeddingTable* table, const TitleList& titles);

std::string ClusterArtifactsToJson(const ClusterArtifacts& artifacts);

// Throws Error(kSchema) on a format or version mismatch.
ClusterArtifacts ClusterArtifactsFromJson(std::string_view text);

}  // namespace clusteraug

#endif  // CLUSTERAUG_CLUSTERING_H_

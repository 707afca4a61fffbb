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

#include "clusteraug/clustering.h"

#include <algorithm>
#include <string>
#include <utility>

#include "clusteraug/error.h"
#include "clusteraug/kmeans.h"
#include "json.hpp"

namespace clusteraug {

namespace {

constexpr char kFormatName[] = "clusteraug-clusters";

[[noreturn]] void ThrowSchema(const std::string& message) {
  throw Error(ErrorKind::kSchema, "cluster artifact: " + message);
}

}  // namespace

std::size_t ClusterModel::Assign(std::span<const double> vector) const {
  return AssignNearest(vector, centroids, dimension);
}

ClusterArtifacts BuildClusterDictionaries(const Corpus& corpus,
                                          const EmbeddingTable& table,
                                          const TitleList& titles,
                                          const ClusterSpec& spec) {
  ClusterArtifacts artifacts;
  artifacts.inventories = BuildTypeInventories(corpus);

  for (EntityType type : kEntityTypes) {
    const std::size_t t = TypeIndex(type);
    const std::string name(EntityTypeName(type));
    std::vector<std::string> surfaces;
    std::vector<std::vector<double>> vectors;
    for (const std::string& surface : artifacts.inventories[type]) {
      std::optional<EntityVector> v =
          EntityFeatureVector(surface, type, table, titles);
      if (!v) {
        artifacts.unvectorizable[t].insert(surface);
        continue;
      }
      surfaces.push_back(surface);
      vectors.push_back(std::move(v->vector));
    }
    if (!artifacts.unvectorizable[t].empty()) {
      artifacts.warnings.push_back(
          name + ": " + std::to_string(artifacts.unvectorizable[t].size()) +
          " surface(s) without a usable vector were excluded from clustering");
    }
    if (vectors.empty()) continue;

    KMeansOptions options;
    options.k = spec.k[t];
    options.repetitions = spec.repetitions;
    options.max_iterations = spec.max_iterations;
    options.seed = DeriveSeed(spec.seed, {t});
    if (options.k == 0) ThrowInvalid(name + ": k must be at least 1");
    if (vectors.size() < options.k) {
      artifacts.warnings.push_back(
          name + ": only " + std::to_string(vectors.size()) +
          " vectorizable surface(s) for k = " + std::to_string(options.k) +
          "; using a single cluster");
      options.k = 1;
    }
    KMeansResult km = KMeansCosine(vectors, options);

    ClusterModel model;
    model.type = type;
    model.k = km.k;
    model.dimension = km.dimension;
    model.centroids = std::move(km.centroids);
    model.objective = km.objective;
    artifacts.dictionary[t].assign(model.k, {});
    for (std::size_t i = 0; i < surfaces.size(); ++i) {
      model.members.emplace(surfaces[i], km.assignment[i]);
      artifacts.dictionary[t][km.assignment[i]].insert(surfaces[i]);
    }
    artifacts.models[t] = std::move(model);
  }
  return artifacts;
}

AlignedPool Align(const EntityMention& source,
                  const ClusterArtifacts& artifacts,
                  const EmbeddingTable* table, const TitleList& titles) {
  AlignedPool pool;
  const std::string surface = NormalizeSurface(source.surface);
  const std::optional<ClusterModel>& model = artifacts.model(source.type);

  if (model) {
    if (table != nullptr && table->dimension() == model->dimension) {
      std::optional<EntityVector> v =
          EntityFeatureVector(surface, source.type, *table, titles);
      if (v) pool.cluster_id = model->Assign(v->vector);
    } else if (auto it = model->members.find(surface);
               it != model->members.end()) {
      pool.cluster_id = it->second;
    }
  }

  const std::set<std::string>* candidates = nullptr;
  if (pool.cluster_id) {
    candidates = &artifacts.clusters(source.type)[*pool.cluster_id];
  } else {
    pool.fallback = true;
    candidates = &artifacts.inventories[source.type];
  }
  for (const std::string& c : *candidates) {
    if (c != surface) pool.candidates.push_back(c);
  }
  return pool;
}

std::string ClusterArtifactsToJson(const ClusterArtifacts& artifacts) {
  nlohmann::ordered_json doc;
  doc["format"] = kFormatName;
  doc["version"] = kClusterSchemaVersion;
  nlohmann::ordered_json types = nlohmann::ordered_json::array();
  for (EntityType type : kEntityTypes) {
    const std::size_t t = TypeIndex(type);
    nlohmann::ordered_json entry;
    entry["etype"] = std::string(EntityTypeName(type));
    const std::optional<ClusterModel>& model = artifacts.models[t];
    entry["k"] = model ? model->k : 0;
    entry["dimension"] = model ? model->dimension : 0;
    entry["objective"] = model ? model->objective : 0.0;
    nlohmann::ordered_json centroids = nlohmann::ordered_json::array();
    if (model) {
      for (std::size_t j = 0; j < model->k; ++j) {
        std::span<const double> c = model->centroid(j);
        centroids.push_back(std::vector<double>(c.begin(), c.end()));
      }
    }
    entry["centroids"] = std::move(centroids);
    nlohmann::ordered_json clusters = nlohmann::ordered_json::array();
    for (const std::set<std::string>& members : artifacts.dictionary[t]) {
      clusters.push_back(std::vector<std::string>(members.begin(), members.end()));
    }
    entry["clusters"] = std::move(clusters);
    entry["unvectorizable"] = std::vector<std::string>(
        artifacts.unvectorizable[t].begin(), artifacts.unvectorizable[t].end());
    types.push_back(std::move(entry));
  }
  doc["types"] = std::move(types);
  return doc.dump(1) + "\n";
}

ClusterArtifacts ClusterArtifactsFromJson(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    ThrowSchema(std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != kFormatName) {
    ThrowSchema("missing or unexpected 'format' field");
  }
  if (!doc.contains("version") || !doc["version"].is_number_integer() ||
      doc["version"].get<int>() != kClusterSchemaVersion) {
    ThrowSchema("unsupported schema version (expected " +
                std::to_string(kClusterSchemaVersion) + ")");
  }
  ClusterArtifacts artifacts;
  try {
    for (const nlohmann::json& entry : doc.at("types")) {
      std::optional<EntityType> type =
          ParseEntityType(entry.at("etype").get<std::string>());
      if (!type) ThrowSchema("unknown etype");
      const std::size_t t = TypeIndex(*type);
      const std::size_t k = entry.at("k").get<std::size_t>();
      const std::size_t dim = entry.at("dimension").get<std::size_t>();
      for (const std::string& s :
           entry.at("unvectorizable").get<std::vector<std::string>>()) {
        artifacts.unvectorizable[t].insert(s);
        artifacts.inventories[*type].insert(s);
      }
      if (k == 0) continue;
      ClusterModel model;
      model.type = *type;
      model.k = k;
      model.dimension = dim;
      model.objective = entry.at("objective").get<double>();
      const nlohmann::json& centroids = entry.at("centroids");
      const nlohmann::json& clusters = entry.at("clusters");
      if (centroids.size() != k || clusters.size() != k) {
        ThrowSchema("centroid/cluster count does not match k");
      }
      for (const nlohmann::json& c : centroids) {
        std::vector<double> row = c.get<std::vector<double>>();
        if (row.size() != dim) ThrowSchema("centroid dimension mismatch");
        model.centroids.insert(model.centroids.end(), row.begin(), row.end());
      }
      artifacts.dictionary[t].assign(k, {});
      for (std::size_t j = 0; j < k; ++j) {
        for (const std::string& s : clusters[j].get<std::vector<std::string>>()) {
          if (!model.members.emplace(s, j).second) {
            ThrowSchema("surface '" + s + "' is in more than one cluster");
          }
          artifacts.dictionary[t][j].insert(s);
          artifacts.inventories[*type].insert(s);
        }
      }
      artifacts.models[t] = std::move(model);
    }
  } catch (const nlohmann::json::exception& e) {
    ThrowSchema(std::string("malformed document: ") + e.what());
  }
  return artifacts;
}

}  // namespace clusteraug

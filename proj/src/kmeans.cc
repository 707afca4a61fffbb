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

#include "clusteraug/kmeans.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "clusteraug/embeddings.h"
#include "clusteraug/error.h"
#include "clusteraug/rng.h"
#include "kmeans_internal.h"

namespace clusteraug {

namespace kmeans_internal {

std::size_t ValidateInput(std::span<const std::vector<double>> points,
                          const KMeansOptions& options) {
  if (options.k == 0) ThrowInvalid("k-means: k must be at least 1");
  if (options.repetitions == 0) {
    ThrowInvalid("k-means: repetitions must be at least 1");
  }
  if (points.size() < options.k) {
    ThrowInvalid("k-means: " + std::to_string(points.size()) +
                 " points for k = " + std::to_string(options.k));
  }
  const std::size_t dim = points[0].size();
  if (dim == 0) ThrowInvalid("k-means: zero-dimensional points");
  for (const std::vector<double>& p : points) {
    if (p.size() != dim) ThrowInvalid("k-means: dimension mismatch");
    if (std::abs(Norm(p) - 1.0) > 1e-6) {
      ThrowInvalid("k-means: input vectors must be unit-norm");
    }
  }
  return dim;
}

std::vector<std::size_t> InitialIndices(std::size_t n, std::size_t k,
                                        std::uint64_t seed,
                                        std::size_t repetition) {
  Rng rng(DeriveSeed(seed, {0x6b6d65616e73ULL, repetition}));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  PartialShuffle(order, k, rng);
  order.resize(k);
  return order;
}

}  // namespace kmeans_internal

namespace {

struct Restart {
  std::vector<double> centroids;
  std::vector<std::size_t> assignment;
  double objective = 0.0;
  std::vector<double> trace;
};

class LloydRunner {
 public:
  LloydRunner(std::span<const std::vector<double>> points, std::size_t dim,
              const KMeansOptions& options)
      : points_(points),
        n_(points.size()),
        dim_(dim),
        k_(options.k),
        max_iterations_(options.max_iterations),
        similarity_(points.size()),
        members_(options.k) {}

  Restart Run(const std::vector<std::size_t>& seeds) {
    Restart r;
    r.centroids.resize(k_ * dim_);
    for (std::size_t j = 0; j < k_; ++j) {
      std::copy(points_[seeds[j]].begin(), points_[seeds[j]].end(),
                r.centroids.begin() + j * dim_);
    }
    std::vector<std::size_t> previous;
    std::vector<std::size_t> assignment(n_);
    for (std::size_t iter = 0; iter < std::max<std::size_t>(max_iterations_, 1);
         ++iter) {
      AssignAll(r.centroids, assignment);
      ReseedEmpty(r.centroids, assignment);
      r.trace.push_back(Objective());
      const bool stable = assignment == previous;
      previous = assignment;
      UpdateCentroids(assignment, r.centroids);
      if (stable) break;
    }
    RefreshSimilarity(r.centroids, previous);
    r.objective = Objective();
    r.trace.push_back(r.objective);
    r.assignment = std::move(previous);
    return r;
  }

 private:
  std::span<const double> Centroid(const std::vector<double>& c,
                                   std::size_t j) const {
    return std::span<const double>(c).subspan(j * dim_, dim_);
  }

  void AssignAll(const std::vector<double>& centroids,
                 std::vector<std::size_t>& assignment) {
    const long long n = static_cast<long long>(n_);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) {
      const std::vector<double>& p = points_[static_cast<std::size_t>(i)];
      std::size_t best = 0;
      double best_sim = Dot(p, Centroid(centroids, 0));
      for (std::size_t j = 1; j < k_; ++j) {
        double sim = Dot(p, Centroid(centroids, j));
        if (sim > best_sim) {
          best_sim = sim;
          best = j;
        }
      }
      assignment[static_cast<std::size_t>(i)] = best;
      similarity_[static_cast<std::size_t>(i)] = best_sim;
    }
  }

  void RefreshSimilarity(const std::vector<double>& centroids,
                         const std::vector<std::size_t>& assignment) {
    const long long n = static_cast<long long>(n_);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < n; ++i) {
      const std::size_t idx = static_cast<std::size_t>(i);
      similarity_[idx] =
          Dot(points_[idx], Centroid(centroids, assignment[idx]));
    }
  }

  void ReseedEmpty(std::vector<double>& centroids,
                   std::vector<std::size_t>& assignment) {
    std::vector<std::size_t> sizes(k_, 0);
    for (std::size_t a : assignment) ++sizes[a];
    for (std::size_t j = 0; j < k_; ++j) {
      if (sizes[j] != 0) continue;
      std::size_t far = n_;
      double far_sim = 2.0;
      for (std::size_t i = 0; i < n_; ++i) {
        if (sizes[assignment[i]] < 2) continue;
        if (similarity_[i] < far_sim) {
          far_sim = similarity_[i];
          far = i;
        }
      }
      if (far == n_) continue;
      --sizes[assignment[far]];
      assignment[far] = j;
      ++sizes[j];
      std::copy(points_[far].begin(), points_[far].end(),
                centroids.begin() + j * dim_);
      similarity_[far] = Dot(points_[far], Centroid(centroids, j));
    }
  }

  double Objective() const {
    double total = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      total += 1.0 - std::clamp(similarity_[i], -1.0, 1.0);
    }
    return std::max(total, 0.0);
  }

  // Renormalized member mean, summed in ascending point order. A cluster whose
  // mean vanishes keeps its previous centroid.
  void UpdateCentroids(const std::vector<std::size_t>& assignment,
                       std::vector<double>& centroids) {
    for (auto& m : members_) m.clear();
    for (std::size_t i = 0; i < n_; ++i) members_[assignment[i]].push_back(i);
    const long long k = static_cast<long long>(k_);
#pragma omp parallel for schedule(dynamic)
    for (long long jj = 0; jj < k; ++jj) {
      const std::size_t j = static_cast<std::size_t>(jj);
      if (members_[j].empty()) continue;
      std::vector<double> sum(dim_, 0.0);
      for (std::size_t i : members_[j]) {
        for (std::size_t d = 0; d < dim_; ++d) sum[d] += points_[i][d];
      }
      if (Normalize(sum)) {
        std::copy(sum.begin(), sum.end(), centroids.begin() + j * dim_);
      }
    }
  }

  std::span<const std::vector<double>> points_;
  std::size_t n_;
  std::size_t dim_;
  std::size_t k_;
  std::size_t max_iterations_;
  std::vector<double> similarity_;
  std::vector<std::vector<std::size_t>> members_;
};

}  // namespace

KMeansResult KMeansCosine(std::span<const std::vector<double>> points,
                          const KMeansOptions& options) {
  const std::size_t dim = kmeans_internal::ValidateInput(points, options);
  KMeansResult result;
  result.k = options.k;
  result.dimension = dim;
  LloydRunner runner(points, dim, options);
  bool have_best = false;
  for (std::size_t rep = 0; rep < options.repetitions; ++rep) {
    Restart r = runner.Run(kmeans_internal::InitialIndices(
        points.size(), options.k, options.seed, rep));
    result.objective_traces.push_back(r.trace);
    if (!have_best || r.objective < result.objective) {
      have_best = true;
      result.objective = r.objective;
      result.best_repetition = rep;
      result.centroids = std::move(r.centroids);
      result.assignment = std::move(r.assignment);
    }
  }
  return result;
}

std::size_t AssignNearest(std::span<const double> point,
                          std::span<const double> centroids,
                          std::size_t dimension) {
  if (dimension == 0 || point.size() != dimension ||
      centroids.size() % dimension != 0 || centroids.empty()) {
    ThrowInvalid("assign: dimension mismatch");
  }
  const std::size_t k = centroids.size() / dimension;
  std::size_t best = 0;
  double best_sim = -2.0;
  for (std::size_t j = 0; j < k; ++j) {
    double sim = Dot(point, centroids.subspan(j * dimension, dimension));
    if (sim > best_sim) {
      best_sim = sim;
      best = j;
    }
  }
  return best;
}

}  // namespace clusteraug

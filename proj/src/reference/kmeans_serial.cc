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

#include <algorithm>
#include <vector>

#include "../kmeans_internal.h"
#include "clusteraug/embeddings.h"
#include "clusteraug/kmeans.h"

namespace clusteraug::reference {

namespace {

using Matrix = std::vector<std::vector<double>>;

double Similarity(const std::vector<double>& a, const std::vector<double>& b) {
  return Dot(a, b);
}

double TotalDistance(const std::vector<double>& sims) {
  double total = 0.0;
  for (double s : sims) total += 1.0 - std::clamp(s, -1.0, 1.0);
  return std::max(total, 0.0);
}

}  // namespace

KMeansResult KMeansCosineSerial(std::span<const std::vector<double>> points,
                                const KMeansOptions& options) {
  const std::size_t dim = kmeans_internal::ValidateInput(points, options);
  const std::size_t n = points.size();
  const std::size_t k = options.k;

  KMeansResult best;
  best.k = k;
  best.dimension = dim;
  Matrix best_centroids;

  for (std::size_t rep = 0; rep < options.repetitions; ++rep) {
    Matrix centroids;
    for (std::size_t idx :
         kmeans_internal::InitialIndices(n, k, options.seed, rep)) {
      centroids.push_back(points[idx]);
    }
    std::vector<std::size_t> assignment(n);
    std::vector<std::size_t> previous;
    std::vector<double> sims(n);
    std::vector<double> trace;
    const std::size_t iterations = std::max<std::size_t>(options.max_iterations, 1);

    for (std::size_t iter = 0; iter < iterations; ++iter) {
      for (std::size_t i = 0; i < n; ++i) {
        assignment[i] = 0;
        sims[i] = Similarity(points[i], centroids[0]);
        for (std::size_t j = 1; j < k; ++j) {
          double s = Similarity(points[i], centroids[j]);
          if (s > sims[i]) {
            sims[i] = s;
            assignment[i] = j;
          }
        }
      }

      for (std::size_t j = 0; j < k; ++j) {
        std::vector<std::size_t> count(k, 0);
        for (std::size_t a : assignment) ++count[a];
        if (count[j] > 0) continue;
        std::size_t far = n;
        for (std::size_t i = 0; i < n; ++i) {
          if (count[assignment[i]] < 2) continue;
          if (far == n || sims[i] < sims[far]) far = i;
        }
        if (far == n) continue;
        assignment[far] = j;
        centroids[j] = points[far];
        sims[far] = Similarity(points[far], centroids[j]);
      }

      trace.push_back(TotalDistance(sims));
      const bool stable = assignment == previous;
      previous = assignment;

      for (std::size_t j = 0; j < k; ++j) {
        std::vector<double> sum(dim, 0.0);
        bool any = false;
        for (std::size_t i = 0; i < n; ++i) {
          if (assignment[i] != j) continue;
          any = true;
          for (std::size_t d = 0; d < dim; ++d) sum[d] += points[i][d];
        }
        if (any && Normalize(sum)) centroids[j] = sum;
      }
      if (stable) break;
    }

    for (std::size_t i = 0; i < n; ++i) {
      sims[i] = Similarity(points[i], centroids[previous[i]]);
    }
    const double objective = TotalDistance(sims);
    trace.push_back(objective);
    best.objective_traces.push_back(trace);
    if (rep == 0 || objective < best.objective) {
      best.objective = objective;
      best.best_repetition = rep;
      best.assignment = previous;
      best_centroids = centroids;
    }
  }

  best.centroids.clear();
  for (const std::vector<double>& c : best_centroids) {
    best.centroids.insert(best.centroids.end(), c.begin(), c.end());
  }
  return best;
}

}  // namespace clusteraug::reference

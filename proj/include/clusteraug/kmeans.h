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

#ifndef CLUSTERAUG_KMEANS_H_
#define CLUSTERAUG_KMEANS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace clusteraug {

struct KMeansOptions {
  std::size_t k = 2;
  std::size_t repetitions = 25;
  std::size_t max_iterations = 100;
  std::uint64_t seed = 0;
};

struct KMeansResult {
  std::size_t k = 0;
  std::size_t dimension = 0;
  // k rows of `dimension` values, each unit-norm.
  std::vector<double> centroids;
  std::vector<std::size_t> assignment;
  // Sum over points of 1 - cos(point, centroid).
  double objective = 0.0;
  std::size_t best_repetition = 0;
  // Objective after every assignment step of each repetition, plus the value
  // after the final centroid update.
  std::vector<std::vector<double>> objective_traces;

  std::span<const double> centroid(std::size_t id) const {
    return std::span<const double>(centroids).subspan(id * dimension,
                                                      dimension);
  }
};

// Spherical (cosine) Lloyd iterations with `repetitions` random restarts;
// the restart with the lowest objective wins, ties going to the earliest.
// Each restart seeds k distinct input points; an empty cluster is reseeded
// with the point farthest from its centroid. Points must be unit-norm and of
// equal dimension. Assignment runs in parallel; output does not depend on the
// thread count.
KMeansResult KMeansCosine(std::span<const std::vector<double>> points,
                          const KMeansOptions& options);

// Nearest centroid by cosine, lowest id on ties.
std::size_t AssignNearest(std::span<const double> point,
                          std::span<const double> centroids,
                          std::size_t dimension);

namespace reference {

// Plain single-threaded implementation of KMeansCosine, kept as a test
// oracle and benchmark baseline. Must agree bit-for-bit.
KMeansResult KMeansCosineSerial(std::span<const std::vector<double>> points,
                                const KMeansOptions& options);

}  // namespace reference

}  // namespace clusteraug

#endif  // CLUSTERAUG_KMEANS_H_

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

#ifndef CLUSTERAUG_SRC_KMEANS_INTERNAL_H_
#define CLUSTERAUG_SRC_KMEANS_INTERNAL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "clusteraug/kmeans.h"

namespace clusteraug::kmeans_internal {

// Throws unless there are >= k unit-norm points of one dimension. Returns
// the dimension.
std::size_t ValidateInput(std::span<const std::vector<double>> points,
                          const KMeansOptions& options);

// k distinct point indices for one restart.
std::vector<std::size_t> InitialIndices(std::size_t n, std::size_t k,
                                        std::uint64_t seed,
                                        std::size_t repetition);

}  // namespace clusteraug::kmeans_internal

#endif  // CLUSTERAUG_SRC_KMEANS_INTERNAL_H_

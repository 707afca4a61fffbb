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

#ifndef CLUSTERAUG_SURFACE_MATCHER_H_
#define CLUSTERAUG_SURFACE_MATCHER_H_

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "clusteraug/corpus.h"

namespace clusteraug {

struct SurfaceMatch {
  std::size_t start = 0;
  std::size_t length = 0;
  EntityType type = EntityType::kPer;

  friend bool operator==(const SurfaceMatch&, const SurfaceMatch&) = default;
};

// Token-level trie over typed surfaces. Immutable after construction.
class SurfaceMatcher {
 public:
  SurfaceMatcher() = default;
  explicit SurfaceMatcher(const TypeInventories& inventories);

  // Selects non-overlapping matches lying entirely on positions where
  // `eligible` is true (all positions when empty). Matches are chosen
  // greedily: longest first, then leftmost, then PER > LOC > ORG. Result is
  // sorted by start.
  std::vector<SurfaceMatch> Match(std::span<const std::string> tokens,
                                  const std::vector<bool>& eligible = {}) const;

  std::size_t num_surfaces() const { return num_surfaces_; }

 private:
  struct Node {
    std::unordered_map<std::string, std::size_t> next;
    unsigned type_mask = 0;
  };

  std::vector<Node> nodes_{1};
  std::size_t num_surfaces_ = 0;
};

}  // namespace clusteraug

#endif  // CLUSTERAUG_SURFACE_MATCHER_H_

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

#include "clusteraug/surface_matcher.h"

#include <algorithm>
#include <bit>
#include <tuple>

namespace clusteraug {

SurfaceMatcher::SurfaceMatcher(const TypeInventories& inventories) {
  for (EntityType type : kEntityTypes) {
    for (const std::string& surface : inventories[type]) {
      std::vector<std::string> tokens = SplitWhitespace(surface);
      if (tokens.empty()) continue;
      std::size_t node = 0;
      for (std::string& token : tokens) {
        auto it = nodes_[node].next.find(token);
        if (it == nodes_[node].next.end()) {
          nodes_.emplace_back();
          it = nodes_[node].next.emplace(std::move(token), nodes_.size() - 1)
                   .first;
        }
        node = it->second;
      }
      if (nodes_[node].type_mask == 0) ++num_surfaces_;
      nodes_[node].type_mask |= 1u << TypeIndex(type);
    }
  }
}

std::vector<SurfaceMatch> SurfaceMatcher::Match(
    std::span<const std::string> tokens,
    const std::vector<bool>& eligible) const {
  const std::size_t n = tokens.size();
  auto ok = [&](std::size_t i) { return eligible.empty() || eligible[i]; };

  std::vector<SurfaceMatch> candidates;
  for (std::size_t start = 0; start < n; ++start) {
    std::size_t node = 0;
    for (std::size_t end = start; end < n && ok(end); ++end) {
      auto it = nodes_[node].next.find(tokens[end]);
      if (it == nodes_[node].next.end()) break;
      node = it->second;
      unsigned mask = nodes_[node].type_mask;
      if (mask != 0) {
        // Lowest bit is the highest-priority type.
        auto type = static_cast<EntityType>(std::countr_zero(mask));
        candidates.push_back({start, end - start + 1, type});
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const SurfaceMatch& a, const SurfaceMatch& b) {
              return std::make_tuple(b.length, a.start) <
                     std::make_tuple(a.length, b.start);
            });

  std::vector<bool> taken(n, false);
  std::vector<SurfaceMatch> accepted;
  for (const SurfaceMatch& match : candidates) {
    bool free = true;
    for (std::size_t k = 0; k < match.length && free; ++k) {
      free = !taken[match.start + k];
    }
    if (!free) continue;
    for (std::size_t k = 0; k < match.length; ++k) taken[match.start + k] = true;
    accepted.push_back(match);
  }
  std::sort(accepted.begin(), accepted.end(),
            [](const SurfaceMatch& a, const SurfaceMatch& b) {
              return a.start < b.start;
            });
  return accepted;
}

}  // namespace clusteraug

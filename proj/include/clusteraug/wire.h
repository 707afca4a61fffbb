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

#ifndef CLUSTERAUG_WIRE_H_
#define CLUSTERAUG_WIRE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace clusteraug {

// Line-delimited records exchanged with external taggers. Each record is one
// compact JSON object on a single newline-terminated UTF-8 line:
//
//   tag request:         {"id":7,"tokens":["a","b"]}
//   similarity request:  {"id":8,"tokens":[...],"span":[start,length],
//                         "candidate":"x y"}
//   tag response:        {"id":7,"labels":["O","B-PER"]}
//   similarity response: {"id":8,"similarity":0.25}
//   error response:      {"id":7,"error":"message"}
//
// Responses may carry "truncated":true. Unknown fields are ignored.
struct WireRequest {
  std::uint64_t id = 0;
  std::vector<std::string> tokens;
  // Present for similarity requests only.
  std::optional<std::pair<std::size_t, std::size_t>> span;
  std::optional<std::string> candidate;

  bool is_similarity() const { return candidate.has_value(); }
};

struct WireResponse {
  std::uint64_t id = 0;
  std::optional<std::vector<std::string>> labels;
  std::optional<double> similarity;
  std::optional<std::string> error;
  bool truncated = false;
};

// Encoders return the record without the trailing newline.
std::string EncodeRequest(const WireRequest& request);
std::string EncodeResponse(const WireResponse& response);

// Throw Error(kContract) on malformed records.
WireRequest DecodeRequest(std::string_view line);
WireResponse DecodeResponse(std::string_view line);

}  // namespace clusteraug

#endif  // CLUSTERAUG_WIRE_H_

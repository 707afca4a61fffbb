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

#ifndef CLUSTERAUG_SCORER_H_
#define CLUSTERAUG_SCORER_H_

#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "clusteraug/corpus.h"
#include "clusteraug/line_channel.h"
#include "clusteraug/surface_matcher.h"
#include "clusteraug/wire.h"

namespace clusteraug {

// A sequence tagger used to validate augmented sentences. Implementations
// return exactly one label per token and a valid BIO sequence.
class Scorer {
 public:
  virtual ~Scorer() = default;

  virtual std::vector<Label> Tag(std::span<const std::string> tokens) const = 0;

  virtual std::vector<std::vector<Label>> TagBatch(
      std::span<const std::vector<std::string>> batch) const;
};

// Dictionary tagger compiled from the entity inventories of a training
// corpus. Matching is longest first, then leftmost, then PER > LOC > ORG.
// Immutable and safe to share between threads.
class GazetteerTagger : public Scorer {
 public:
  // Throws on an empty corpus.
  explicit GazetteerTagger(const Corpus& train);
  explicit GazetteerTagger(const TypeInventories& inventories);

  std::vector<Label> Tag(std::span<const std::string> tokens) const override;
  std::vector<std::vector<Label>> TagBatch(
      std::span<const std::vector<std::string>> batch) const override;

  const TypeInventories& inventories() const { return inventories_; }

 private:
  TypeInventories inventories_;
  SurfaceMatcher matcher_;
};

struct ExternalEndpoint {
  // Exactly one of these is set.
  std::string command;  // spawned through /bin/sh -c
  std::string address;  // host:port
  std::chrono::milliseconds timeout{30000};
};

// Correlates requests and responses by id over a LineChannel. The channel is
// opened lazily on first use.
class WireClient {
 public:
  explicit WireClient(ExternalEndpoint endpoint);

  // Assigns fresh ids, sends all requests and returns the responses in
  // request order. Throws kContract on unknown, duplicate or missing ids.
  std::vector<WireResponse> RoundTrip(std::vector<WireRequest> requests);

 private:
  ExternalEndpoint endpoint_;
  std::mutex mu_;
  std::unique_ptr<LineChannel> channel_;
  std::uint64_t next_id_ = 1;
};

struct ExternalScorerOptions {
  ExternalEndpoint endpoint;
  // Repair orphan I- labels and map unknown labels to O instead of failing.
  bool lenient = false;
};

class ExternalScorer : public Scorer {
 public:
  explicit ExternalScorer(ExternalScorerOptions options);

  std::vector<Label> Tag(std::span<const std::string> tokens) const override;
  std::vector<std::vector<Label>> TagBatch(
      std::span<const std::vector<std::string>> batch) const override;

 private:
  std::vector<Label> Validate(const WireResponse& response,
                              std::size_t n_tokens) const;

  ExternalScorerOptions options_;
  mutable WireClient client_;
};

}  // namespace clusteraug

#endif  // CLUSTERAUG_SCORER_H_

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

#ifndef CLUSTERAUG_AUGMENT_H_
#define CLUSTERAUG_AUGMENT_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "clusteraug/clustering.h"
#include "clusteraug/corpus.h"
#include "clusteraug/embeddings.h"
#include "clusteraug/rng.h"
#include "clusteraug/scorer.h"

namespace clusteraug {

struct TopK {
  std::size_t k = 1;
};
// Every candidate whose plausibility is exactly 1.0.
struct AllCorrect {};
using SelectionMode = std::variant<TopK, AllCorrect>;

// Parses "top1", "top2", "topK=N" and "all-correct".
SelectionMode ParseSelectionMode(std::string_view text);
std::string SelectionModeName(const SelectionMode& mode);

enum class AugMethod { kCluster, kEdaRr, kGenerative };
std::string_view AugMethodName(AugMethod method);

struct AugConfig {
  std::size_t candidates_per_sentence = 5;
  // Size of the random subset of the aligned pool searched for the most
  // similar surface.
  std::size_t subset_size = 20;
  SelectionMode selection = TopK{1};
  std::size_t iterations = 1;
  std::uint64_t seed = kDefaultSeed;
  // Score a candidate 0 (with a logged event) when the scorer fails, instead
  // of aborting the run.
  bool degrade_scorer_failures = false;
};

struct Replacement {
  std::size_t mention_index = 0;
  std::string source;
  std::string candidate;
  std::optional<std::size_t> cluster_id;
  std::optional<double> similarity;
  bool fallback = false;
};

struct AugCandidate {
  TaggedSentence sentence;
  std::vector<Replacement> replacements;
  double plausibility = 0.0;
  std::size_t generation_order = 0;
};

struct ProvenanceRecord {
  std::size_t origin = 0;
  std::size_t iteration = 1;
  AugMethod method = AugMethod::kCluster;
  std::size_t generation_order = 0;
  std::vector<Replacement> replacements;
  std::optional<double> plausibility;
};

// Something worth recording that did not produce an output sentence (a
// dropped sentence, an empty or exhausted pool, a scorer failure).
struct ProvenanceEvent {
  std::size_t origin = 0;
  std::size_t iteration = 1;
  std::string message;
};

struct ProvenanceLog {
  std::vector<ProvenanceRecord> records;  // one per output sentence
  std::vector<ProvenanceEvent> events;
};

// One JSON object per line; records first, then events.
std::string ProvenanceToJsonLines(const ProvenanceLog& log);

struct AugmentResult {
  Corpus corpus;
  ProvenanceLog provenance;
  // Requests that failed in transport (generative method only).
  std::size_t transport_failures = 0;
  std::size_t requests = 0;
};

// Scores replacement surfaces against a source mention; higher is more
// similar. Implementations must be safe for concurrent calls.
class SimilarityProvider {
 public:
  virtual ~SimilarityProvider() = default;
  virtual std::vector<double> Score(
      const TaggedSentence& sentence, const EntityMention& source,
      std::span<const std::string> candidates) const = 0;
};

// Cosine between entity feature vectors. Pairs where either side has no
// vector score -2, below every real cosine.
class StaticSimilarity : public SimilarityProvider {
 public:
  StaticSimilarity(const EmbeddingTable& table, const TitleList& titles)
      : table_(table), titles_(titles) {}

  std::vector<double> Score(
      const TaggedSentence& sentence, const EntityMention& source,
      std::span<const std::string> candidates) const override;

 private:
  const EmbeddingTable& table_;
  const TitleList& titles_;
};

// Delegates to an external process through similarity wire records.
class ExternalSimilarity : public SimilarityProvider {
 public:
  explicit ExternalSimilarity(ExternalEndpoint endpoint)
      : client_(std::move(endpoint)) {}

  std::vector<double> Score(
      const TaggedSentence& sentence, const EntityMention& source,
      std::span<const std::string> candidates) const override;

 private:
  mutable WireClient client_;
};

// Replaces the mention's tokens with `replacement` and relabels the new span
// B-X I-X...; everything else is unchanged.
TaggedSentence Reannotate(const TaggedSentence& sentence,
                          const EntityMention& mention,
                          std::span<const std::string> replacement);

struct CandidateContext {
  const ClusterArtifacts& artifacts;
  const EmbeddingTable* table;  // may be null: stored memberships are used
  const TitleList& titles;
  const SimilarityProvider& similarity;
};

struct GeneratedCandidates {
  std::vector<AugCandidate> candidates;
  std::vector<std::string> notes;
};

GeneratedCandidates GenerateCandidates(const TaggedSentence& sentence,
                                       const CandidateContext& context,
                                       const AugConfig& config, Rng& rng);

// Entity micro-F1 of `predicted` against `reference`.
double Plausibility(std::span<const Label> reference,
                    std::span<const Label> predicted);

double ScoreCandidate(const AugCandidate& candidate, const Scorer& scorer);

// TopK: best k by plausibility, ties to the earlier generation order.
// AllCorrect: plausibility == 1.0, in generation order.
std::vector<AugCandidate> Select(std::vector<AugCandidate> candidates,
                                 const SelectionMode& mode);

// Cluster-based augmentation of every sentence with at least one mention.
// Per-sentence randomness is derived from (seed, sentence, iteration), so
// output does not depend on the thread count.
AugmentResult AugmentCorpus(const Corpus& corpus,
                            const CandidateContext& context,
                            const Scorer& scorer, const AugConfig& config);

// Random same-type replacement of every mention in every sentence that has
// one. A surface is never replaced by itself unless it is the only one of
// its type.
AugmentResult EdaRandomReplace(const Corpus& corpus,
                               const TypeInventories& inventories,
                               std::uint64_t seed);

}  // namespace clusteraug

#endif  // CLUSTERAUG_AUGMENT_H_

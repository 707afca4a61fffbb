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

#include "clusteraug/augment.h"

#include <algorithm>
#include <charconv>
#include <set>
#include <string>
#include <utility>

#include "clusteraug/error.h"
#include "clusteraug/eval.h"
#include "json.hpp"

namespace clusteraug {

namespace {

constexpr double kNoSimilarity = -2.0;

constexpr std::uint64_t kClusterStream = 0x636c7573ULL;
constexpr std::uint64_t kEdaStream = 0x656461ULL;

struct WorkItem {
  std::size_t origin;
  std::size_t iteration;
};

}  // namespace

SelectionMode ParseSelectionMode(std::string_view text) {
  if (text == "all-correct") return AllCorrect{};
  if (text == "top1") return TopK{1};
  if (text == "top2") return TopK{2};
  std::string_view digits;
  if (text.rfind("topK=", 0) == 0) {
    digits = text.substr(5);
  } else if (text.rfind("top", 0) == 0) {
    digits = text.substr(3);
  }
  std::size_t k = 0;
  auto [ptr, ec] =
      std::from_chars(digits.data(), digits.data() + digits.size(), k);
  if (digits.empty() || ec != std::errc() ||
      ptr != digits.data() + digits.size() || k == 0) {
    ThrowInvalid("unknown selection mode '" + std::string(text) +
                 "' (expected top1, top2, topK=N or all-correct)");
  }
  return TopK{k};
}

std::string SelectionModeName(const SelectionMode& mode) {
  if (std::holds_alternative<AllCorrect>(mode)) return "all-correct";
  return "top" + std::to_string(std::get<TopK>(mode).k);
}

std::string_view AugMethodName(AugMethod method) {
  switch (method) {
    case AugMethod::kCluster:
      return "cluster";
    case AugMethod::kEdaRr:
      return "eda-rr";
    case AugMethod::kGenerative:
      return "generative";
  }
  return "?";
}

std::string ProvenanceToJsonLines(const ProvenanceLog& log) {
  std::string out;
  for (const ProvenanceRecord& record : log.records) {
    nlohmann::ordered_json j;
    j["type"] = "augmented";
    j["origin"] = record.origin;
    j["iteration"] = record.iteration;
    j["method"] = std::string(AugMethodName(record.method));
    j["generation_order"] = record.generation_order;
    if (record.plausibility) j["plausibility"] = *record.plausibility;
    nlohmann::ordered_json reps = nlohmann::ordered_json::array();
    for (const Replacement& r : record.replacements) {
      nlohmann::ordered_json e;
      e["mention"] = r.mention_index;
      e["source"] = r.source;
      e["candidate"] = r.candidate;
      if (r.cluster_id) e["cluster"] = *r.cluster_id;
      if (r.similarity) e["similarity"] = *r.similarity;
      if (r.fallback) e["fallback"] = true;
      reps.push_back(std::move(e));
    }
    j["replacements"] = std::move(reps);
    out += j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
    out += '\n';
  }
  for (const ProvenanceEvent& event : log.events) {
    nlohmann::ordered_json j;
    j["type"] = "event";
    j["origin"] = event.origin;
    j["iteration"] = event.iteration;
    j["message"] = event.message;
    out += j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
    out += '\n';
  }
  return out;
}

std::vector<double> StaticSimilarity::Score(
    const TaggedSentence& /*sentence*/, const EntityMention& source,
    std::span<const std::string> candidates) const {
  std::vector<double> scores(candidates.size(), kNoSimilarity);
  std::optional<EntityVector> src =
      EntityFeatureVector(source.surface, source.type, table_, titles_);
  if (!src) return scores;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    std::optional<EntityVector> v =
        EntityFeatureVector(candidates[i], source.type, table_, titles_);
    if (v) scores[i] = Cosine(src->vector, v->vector);
  }
  return scores;
}

std::vector<double> ExternalSimilarity::Score(
    const TaggedSentence& sentence, const EntityMention& source,
    std::span<const std::string> candidates) const {
  std::vector<WireRequest> requests(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    requests[i].tokens = sentence.tokens;
    requests[i].span = {source.start, source.length};
    requests[i].candidate = candidates[i];
  }
  std::vector<WireResponse> responses = client_.RoundTrip(std::move(requests));
  std::vector<double> scores;
  scores.reserve(responses.size());
  for (const WireResponse& r : responses) {
    if (r.error || !r.similarity) {
      throw Error(ErrorKind::kContract,
                  "external similarity: " + r.error.value_or("no similarity"));
    }
    scores.push_back(*r.similarity);
  }
  return scores;
}

TaggedSentence Reannotate(const TaggedSentence& sentence,
                          const EntityMention& mention,
                          std::span<const std::string> replacement) {
  if (mention.length == 0 || mention.start + mention.length > sentence.size()) {
    ThrowInvalid("reannotate: mention span out of bounds");
  }
  if (replacement.empty()) ThrowInvalid("reannotate: empty replacement");
  TaggedSentence out;
  const std::size_t new_size =
      sentence.size() - mention.length + replacement.size();
  out.tokens.reserve(new_size);
  out.labels.reserve(new_size);
  for (std::size_t i = 0; i < mention.start; ++i) {
    out.tokens.push_back(sentence.tokens[i]);
    out.labels.push_back(sentence.labels[i]);
  }
  for (std::size_t i = 0; i < replacement.size(); ++i) {
    out.tokens.push_back(replacement[i]);
    out.labels.push_back(i == 0 ? Label::B(mention.type)
                                : Label::I(mention.type));
  }
  for (std::size_t i = mention.start + mention.length; i < sentence.size();
       ++i) {
    out.tokens.push_back(sentence.tokens[i]);
    out.labels.push_back(sentence.labels[i]);
  }
  return out;
}

GeneratedCandidates GenerateCandidates(const TaggedSentence& sentence,
                                       const CandidateContext& context,
                                       const AugConfig& config, Rng& rng) {
  GeneratedCandidates result;
  const std::vector<EntityMention> mentions = SentenceMentions(sentence);
  if (mentions.empty()) return result;
  if (config.candidates_per_sentence == 0 || config.subset_size == 0) {
    ThrowInvalid("candidates_per_sentence and subset_size must be positive");
  }

  std::vector<AlignedPool> pools;
  pools.reserve(mentions.size());
  for (std::size_t m = 0; m < mentions.size(); ++m) {
    pools.push_back(
        Align(mentions[m], context.artifacts, context.table, context.titles));
    if (pools[m].candidates.empty()) {
      result.notes.push_back("mention " + std::to_string(m) + " '" +
                             mentions[m].surface +
                             "': empty candidate pool, left unreplaced");
    } else if (pools[m].fallback) {
      result.notes.push_back("mention " + std::to_string(m) + " '" +
                             mentions[m].surface +
                             "': no cluster, using whole-type inventory");
    }
  }
  std::vector<std::set<std::string>> used(mentions.size());
  std::vector<bool> exhausted_noted(mentions.size(), false);

  for (std::size_t c = 0; c < config.candidates_per_sentence; ++c) {
    AugCandidate candidate;
    candidate.generation_order = c;
    candidate.sentence = sentence;
    long long delta = 0;
    for (std::size_t m = 0; m < mentions.size(); ++m) {
      const AlignedPool& pool = pools[m];
      if (pool.candidates.empty()) continue;
      std::vector<std::string> available;
      for (const std::string& s : pool.candidates) {
        if (used[m].count(s) == 0) available.push_back(s);
      }
      if (available.empty()) {
        if (!exhausted_noted[m]) {
          exhausted_noted[m] = true;
          result.notes.push_back("mention " + std::to_string(m) + " '" +
                                 mentions[m].surface +
                                 "': pool exhausted after " +
                                 std::to_string(pool.candidates.size()) +
                                 " candidate(s), reusing surfaces");
        }
        available = pool.candidates;
      }
      const std::size_t take = std::min(config.subset_size, available.size());
      PartialShuffle(available, take, rng);
      available.resize(take);

      const std::vector<double> scores =
          context.similarity.Score(sentence, mentions[m], available);
      std::size_t best = 0;
      for (std::size_t i = 1; i < scores.size(); ++i) {
        if (scores[i] > scores[best]) best = i;
      }
      used[m].insert(available[best]);

      EntityMention shifted = mentions[m];
      shifted.start = static_cast<std::size_t>(
          static_cast<long long>(shifted.start) + delta);
      const std::vector<std::string> tokens = SplitWhitespace(available[best]);
      candidate.sentence = Reannotate(candidate.sentence, shifted, tokens);
      delta += static_cast<long long>(tokens.size()) -
               static_cast<long long>(mentions[m].length);

      Replacement replacement;
      replacement.mention_index = m;
      replacement.source = mentions[m].surface;
      replacement.candidate = available[best];
      replacement.cluster_id = pool.cluster_id;
      replacement.similarity = scores[best];
      replacement.fallback = pool.fallback;
      candidate.replacements.push_back(std::move(replacement));
    }
    result.candidates.push_back(std::move(candidate));
  }
  return result;
}

double Plausibility(std::span<const Label> reference,
                    std::span<const Label> predicted) {
  if (reference.size() != predicted.size()) {
    throw Error(ErrorKind::kContract,
                "scorer returned " + std::to_string(predicted.size()) +
                    " labels for " + std::to_string(reference.size()) +
                    " tokens");
  }
  return SentencePrf(reference, predicted).micro.f1();
}

double ScoreCandidate(const AugCandidate& candidate, const Scorer& scorer) {
  return Plausibility(candidate.sentence.labels,
                      scorer.Tag(candidate.sentence.tokens));
}

std::vector<AugCandidate> Select(std::vector<AugCandidate> candidates,
                                 const SelectionMode& mode) {
  if (std::holds_alternative<AllCorrect>(mode)) {
    std::vector<AugCandidate> out;
    for (AugCandidate& c : candidates) {
      if (c.plausibility == 1.0) out.push_back(std::move(c));
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const AugCandidate& a, const AugCandidate& b) {
                       return a.generation_order < b.generation_order;
                     });
    return out;
  }
  const std::size_t k = std::get<TopK>(mode).k;
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const AugCandidate& a, const AugCandidate& b) {
                     if (a.plausibility != b.plausibility) {
                       return a.plausibility > b.plausibility;
                     }
                     return a.generation_order < b.generation_order;
                   });
  if (candidates.size() > k) candidates.resize(k);
  return candidates;
}

AugmentResult AugmentCorpus(const Corpus& corpus,
                            const CandidateContext& context,
                            const Scorer& scorer, const AugConfig& config) {
  if (config.iterations == 0) ThrowInvalid("iterations must be at least 1");

  std::vector<WorkItem> work;
  for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
    const auto& labels = corpus.sentences[s].labels;
    if (std::none_of(labels.begin(), labels.end(),
                     [](Label l) { return !l.IsOutside(); })) {
      continue;
    }
    for (std::size_t it = 1; it <= config.iterations; ++it) {
      work.push_back({s, it});
    }
  }
  std::sort(work.begin(), work.end(), [](const WorkItem& a, const WorkItem& b) {
    return std::make_pair(a.origin, a.iteration) <
           std::make_pair(b.origin, b.iteration);
  });

  // Generation: independent per work item.
  std::vector<GeneratedCandidates> generated(work.size());
  std::vector<std::string> failures(work.size());
  const long long n_work = static_cast<long long>(work.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (long long w = 0; w < n_work; ++w) {
    const std::size_t i = static_cast<std::size_t>(w);
    try {
      Rng rng(DeriveSeed(config.seed,
                         {kClusterStream, work[i].origin, work[i].iteration}));
      generated[i] = GenerateCandidates(corpus.sentences[work[i].origin],
                                        context, config, rng);
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  }
  for (const std::string& f : failures) {
    if (!f.empty()) throw Error(ErrorKind::kInvalidInput, f);
  }

  // Drop repeated sentences within one work item before scoring.
  for (GeneratedCandidates& g : generated) {
    std::vector<AugCandidate> unique;
    for (AugCandidate& c : g.candidates) {
      bool seen = std::any_of(unique.begin(), unique.end(),
                              [&](const AugCandidate& u) {
                                return u.sentence.tokens == c.sentence.tokens;
                              });
      if (!seen) unique.push_back(std::move(c));
    }
    if (unique.size() < g.candidates.size()) {
      g.notes.push_back(std::to_string(unique.size()) +
                        " distinct candidate(s) out of " +
                        std::to_string(g.candidates.size()));
    }
    g.candidates = std::move(unique);
  }

  // Scoring: one batch so external taggers can pipeline requests.
  std::vector<std::vector<std::string>> batch;
  for (const GeneratedCandidates& g : generated) {
    for (const AugCandidate& c : g.candidates) batch.push_back(c.sentence.tokens);
  }
  std::vector<std::vector<Label>> predicted;
  std::vector<std::string> scorer_errors(batch.size());
  try {
    predicted = scorer.TagBatch(batch);
  } catch (const Error& e) {
    if (!config.degrade_scorer_failures) throw;
    predicted.assign(batch.size(), {});
    for (std::size_t i = 0; i < batch.size(); ++i) {
      try {
        predicted[i] = scorer.Tag(batch[i]);
      } catch (const Error& inner) {
        scorer_errors[i] = inner.what();
      }
    }
  }

  AugmentResult result;
  result.corpus.scheme = Scheme::kBio;
  std::size_t flat = 0;
  for (std::size_t i = 0; i < work.size(); ++i) {
    const TaggedSentence& origin = corpus.sentences[work[i].origin];
    for (const std::string& note : generated[i].notes) {
      result.provenance.events.push_back(
          {work[i].origin, work[i].iteration, note});
    }
    for (AugCandidate& c : generated[i].candidates) {
      const std::size_t b = flat++;
      if (!scorer_errors[b].empty()) {
        c.plausibility = 0.0;
        result.provenance.events.push_back(
            {work[i].origin, work[i].iteration,
             "scorer failed on candidate " + std::to_string(c.generation_order) +
                 " (scored 0): " + scorer_errors[b]});
        continue;
      }
      try {
        c.plausibility = Plausibility(c.sentence.labels, predicted[b]);
      } catch (const Error& e) {
        if (!config.degrade_scorer_failures) throw;
        c.plausibility = 0.0;
        result.provenance.events.push_back(
            {work[i].origin, work[i].iteration,
             std::string("scorer contract violation (scored 0): ") + e.what()});
      }
    }
    std::vector<AugCandidate> chosen =
        Select(std::move(generated[i].candidates), config.selection);
    std::stable_sort(chosen.begin(), chosen.end(),
                     [](const AugCandidate& a, const AugCandidate& b) {
                       return a.generation_order < b.generation_order;
                     });
    for (AugCandidate& c : chosen) {
      if (c.sentence.tokens == origin.tokens) {
        result.provenance.events.push_back(
            {work[i].origin, work[i].iteration,
             "candidate identical to the original was skipped"});
        continue;
      }
      ProvenanceRecord record;
      record.origin = work[i].origin;
      record.iteration = work[i].iteration;
      record.method = AugMethod::kCluster;
      record.generation_order = c.generation_order;
      record.replacements = std::move(c.replacements);
      record.plausibility = c.plausibility;
      result.provenance.records.push_back(std::move(record));
      result.corpus.sentences.push_back(std::move(c.sentence));
    }
  }
  return result;
}

AugmentResult EdaRandomReplace(const Corpus& corpus,
                               const TypeInventories& inventories,
                               std::uint64_t seed) {
  std::array<std::vector<std::string>, kNumEntityTypes> pools;
  for (EntityType type : kEntityTypes) {
    pools[TypeIndex(type)].assign(inventories[type].begin(),
                                  inventories[type].end());
  }

  AugmentResult result;
  result.corpus.scheme = Scheme::kBio;
  for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
    const TaggedSentence& sentence = corpus.sentences[s];
    const std::vector<EntityMention> mentions = SentenceMentions(sentence, s);
    if (mentions.empty()) continue;
    Rng rng(DeriveSeed(seed, {kEdaStream, s}));
    TaggedSentence out = sentence;
    ProvenanceRecord record;
    record.origin = s;
    record.method = AugMethod::kEdaRr;
    long long delta = 0;
    for (std::size_t m = 0; m < mentions.size(); ++m) {
      const std::vector<std::string>& pool = pools[TypeIndex(mentions[m].type)];
      if (pool.empty()) {
        result.provenance.events.push_back(
            {s, 1,
             "mention '" + mentions[m].surface + "': empty " +
                 std::string(EntityTypeName(mentions[m].type)) +
                 " inventory, left unreplaced"});
        continue;
      }
      const std::string source = NormalizeSurface(mentions[m].surface);
      auto self = std::lower_bound(pool.begin(), pool.end(), source);
      const bool contains_self = self != pool.end() && *self == source;
      std::size_t pick;
      if (contains_self && pool.size() > 1) {
        pick = UniformIndex(rng, pool.size() - 1);
        const auto self_index = static_cast<std::size_t>(self - pool.begin());
        if (pick >= self_index) ++pick;
      } else {
        pick = UniformIndex(rng, pool.size());
      }
      EntityMention shifted = mentions[m];
      shifted.start = static_cast<std::size_t>(
          static_cast<long long>(shifted.start) + delta);
      const std::vector<std::string> tokens = SplitWhitespace(pool[pick]);
      out = Reannotate(out, shifted, tokens);
      delta += static_cast<long long>(tokens.size()) -
               static_cast<long long>(mentions[m].length);
      Replacement replacement;
      replacement.mention_index = m;
      replacement.source = mentions[m].surface;
      replacement.candidate = pool[pick];
      record.replacements.push_back(std::move(replacement));
    }
    result.provenance.records.push_back(std::move(record));
    result.corpus.sentences.push_back(std::move(out));
  }
  return result;
}

}  // namespace clusteraug

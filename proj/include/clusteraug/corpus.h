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

#ifndef CLUSTERAUG_CORPUS_H_
#define CLUSTERAUG_CORPUS_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace clusteraug {

// Coarse entity types. The declaration order is also the priority order used
// to break ties between equally good dictionary matches.
enum class EntityType : std::uint8_t { kPer = 0, kLoc = 1, kOrg = 2 };

inline constexpr std::size_t kNumEntityTypes = 3;
inline constexpr std::array<EntityType, kNumEntityTypes> kEntityTypes = {
    EntityType::kPer, EntityType::kLoc, EntityType::kOrg};

inline constexpr std::size_t TypeIndex(EntityType type) {
  return static_cast<std::size_t>(type);
}

std::string_view EntityTypeName(EntityType type);
std::optional<EntityType> ParseEntityType(std::string_view name);

enum class Scheme { kBio, kIo };

// A BIO or IO tag. IO labels are stored as kInside with a type; the scheme
// only matters when reading and writing.
struct Label {
  enum class Tag : std::uint8_t { kOutside, kBegin, kInside };

  Tag tag = Tag::kOutside;
  EntityType type = EntityType::kPer;

  static constexpr Label O() { return Label{}; }
  static constexpr Label B(EntityType t) { return Label{Tag::kBegin, t}; }
  static constexpr Label I(EntityType t) { return Label{Tag::kInside, t}; }

  constexpr bool IsOutside() const { return tag == Tag::kOutside; }

  friend constexpr bool operator==(Label a, Label b) {
    return a.tag == b.tag && (a.tag == Tag::kOutside || a.type == b.type);
  }
};

std::string LabelString(Label label, Scheme scheme = Scheme::kBio);
std::optional<Label> ParseLabel(std::string_view text, Scheme scheme);

// All seven BIO label strings, O first.
const std::vector<std::string>& BioLabelStrings();

// True when every I-X directly follows B-X or I-X.
bool IsValidBio(std::span<const Label> labels);

// Rewrites every I-X without a legal predecessor to B-X. Returns the number
// of labels that changed.
std::size_t RepairBio(std::vector<Label>& labels);

struct TaggedSentence {
  std::vector<std::string> tokens;
  std::vector<Label> labels;

  std::size_t size() const { return tokens.size(); }
  friend bool operator==(const TaggedSentence&, const TaggedSentence&) =
      default;
};

struct Corpus {
  std::vector<TaggedSentence> sentences;
  Scheme scheme = Scheme::kBio;

  std::size_t size() const { return sentences.size(); }
  bool empty() const { return sentences.empty(); }
};

enum class ParseMode { kStrict, kLenient };

struct ParseResult {
  Corpus corpus;
  std::vector<std::string> warnings;
};

// Reads "token<ws>tag" lines with blank lines between sentences. The field
// separator is any run of tabs or spaces. Throws Error on malformed lines,
// unknown tags, and (strict mode) illegal I-X continuations.
ParseResult ParseCorpus(std::string_view text, Scheme scheme,
                        ParseMode mode = ParseMode::kStrict);

// Canonical form: "token\ttag\n" per token, one blank line after every
// sentence.
std::string SerializeCorpus(const Corpus& corpus);

// Throws if the corpus is not in the IO scheme.
Corpus IoToBio(const Corpus& corpus);

struct EntityMention {
  std::size_t sentence_index = 0;
  std::size_t start = 0;
  std::size_t length = 0;
  EntityType type = EntityType::kPer;
  std::string surface;

  friend bool operator==(const EntityMention&, const EntityMention&) = default;
};

std::vector<EntityMention> SentenceMentions(const TaggedSentence& sentence,
                                            std::size_t sentence_index = 0);
std::vector<EntityMention> ExtractMentions(const Corpus& corpus);

// Inverse of SentenceMentions for a sentence of `n_tokens` tokens.
std::vector<Label> LabelsFromMentions(std::size_t n_tokens,
                                      std::span<const EntityMention> mentions);

std::vector<std::string> SplitWhitespace(std::string_view text);
std::string JoinTokens(std::span<const std::string> tokens);
// Collapses every whitespace run to one space and trims both ends.
std::string NormalizeSurface(std::string_view surface);

struct TypeInventories {
  std::array<std::set<std::string>, kNumEntityTypes> surfaces;

  const std::set<std::string>& operator[](EntityType type) const {
    return surfaces[TypeIndex(type)];
  }
  std::set<std::string>& operator[](EntityType type) {
    return surfaces[TypeIndex(type)];
  }
};

TypeInventories BuildTypeInventories(const Corpus& corpus);

struct MappingReport {
  struct Row {
    std::size_t mentions_before = 0;
    std::size_t mentions_added = 0;
    double percent_increase = 0.0;
  };
  std::array<Row, kNumEntityTypes> per_type;
  Row total;
};

struct MappingResult {
  Corpus corpus;
  MappingReport report;
};

// Labels unannotated occurrences of inventory surfaces. Only windows made
// entirely of O tokens are considered; existing labels are never touched.
MappingResult MapMissingAnnotations(const Corpus& corpus,
                                    const TypeInventories& inventories);

struct CorpusStats {
  std::size_t sentences = 0;
  std::size_t tokens = 0;
  std::array<std::size_t, kNumEntityTypes> mentions{};

  std::size_t total_mentions() const {
    return mentions[0] + mentions[1] + mentions[2];
  }
};

CorpusStats ComputeCorpusStats(const Corpus& corpus);

struct OverlapReport {
  struct Row {
    std::size_t unique_test = 0;
    std::size_t seen_in_train = 0;
    double percentage = 0.0;
  };
  std::array<Row, kNumEntityTypes> per_type;
  Row total;
};

OverlapReport AnalyzeOverlap(const Corpus& train, const Corpus& test);

}  // namespace clusteraug

#endif  // CLUSTERAUG_CORPUS_H_

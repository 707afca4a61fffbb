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

#include "clusteraug/corpus.h"

#include <algorithm>
#include <string>
#include <utility>

#include "clusteraug/error.h"
#include "clusteraug/surface_matcher.h"

namespace clusteraug {

namespace {

bool IsFieldSpace(char c) { return c == ' ' || c == '\t'; }

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::string LineRef(std::size_t line_number) {
  return "line " + std::to_string(line_number);
}

// Splits on runs of tabs/spaces. A leading separator yields an empty first
// field so that the caller can report it as an empty token.
std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  if (!line.empty() && IsFieldSpace(line[0])) {
    fields.emplace_back();
    while (pos < line.size() && IsFieldSpace(line[pos])) ++pos;
  }
  while (pos < line.size()) {
    std::size_t end = pos;
    while (end < line.size() && !IsFieldSpace(line[end])) ++end;
    fields.push_back(line.substr(pos, end - pos));
    while (end < line.size() && IsFieldSpace(line[end])) ++end;
    pos = end;
  }
  return fields;
}

}  // namespace

std::string_view EntityTypeName(EntityType type) {
  switch (type) {
    case EntityType::kPer:
      return "PER";
    case EntityType::kLoc:
      return "LOC";
    case EntityType::kOrg:
      return "ORG";
  }
  return "?";
}

std::optional<EntityType> ParseEntityType(std::string_view name) {
  if (name == "PER") return EntityType::kPer;
  if (name == "LOC") return EntityType::kLoc;
  if (name == "ORG") return EntityType::kOrg;
  return std::nullopt;
}

std::string LabelString(Label label, Scheme scheme) {
  if (label.IsOutside()) return "O";
  std::string type(EntityTypeName(label.type));
  if (scheme == Scheme::kIo) return type;
  return (label.tag == Label::Tag::kBegin ? "B-" : "I-") + type;
}

std::optional<Label> ParseLabel(std::string_view text, Scheme scheme) {
  if (text == "O") return Label::O();
  if (scheme == Scheme::kIo) {
    if (auto type = ParseEntityType(text)) return Label::I(*type);
    return std::nullopt;
  }
  if (text.size() < 3 || text[1] != '-') return std::nullopt;
  auto type = ParseEntityType(text.substr(2));
  if (!type) return std::nullopt;
  if (text[0] == 'B') return Label::B(*type);
  if (text[0] == 'I') return Label::I(*type);
  return std::nullopt;
}

const std::vector<std::string>& BioLabelStrings() {
  static const std::vector<std::string> kLabels = {
      "O",     "B-PER", "I-PER", "B-LOC",
      "I-LOC", "B-ORG", "I-ORG"};
  return kLabels;
}

bool IsValidBio(std::span<const Label> labels) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].tag != Label::Tag::kInside) continue;
    if (i == 0 || labels[i - 1].IsOutside() ||
        labels[i - 1].type != labels[i].type) {
      return false;
    }
  }
  return true;
}

std::size_t RepairBio(std::vector<Label>& labels) {
  std::size_t repaired = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].tag != Label::Tag::kInside) continue;
    if (i == 0 || labels[i - 1].IsOutside() ||
        labels[i - 1].type != labels[i].type) {
      labels[i].tag = Label::Tag::kBegin;
      ++repaired;
    }
  }
  return repaired;
}

ParseResult ParseCorpus(std::string_view text, Scheme scheme, ParseMode mode) {
  ParseResult result;
  result.corpus.scheme = scheme;
  TaggedSentence current;
  std::size_t sentence_first_line = 0;

  auto flush = [&]() {
    if (current.tokens.empty()) return;
    if (scheme == Scheme::kBio && !IsValidBio(current.labels)) {
      if (mode == ParseMode::kStrict) {
        throw Error(ErrorKind::kInvalidInput,
                    "illegal I- continuation in sentence starting at " +
                        LineRef(sentence_first_line));
      }
      std::size_t n = RepairBio(current.labels);
      result.warnings.push_back("sentence at " + LineRef(sentence_first_line) +
                                ": rewrote " + std::to_string(n) +
                                " orphan I- label(s) to B-");
    }
    result.corpus.sentences.push_back(std::move(current));
    current = TaggedSentence{};
  };

  std::size_t pos = 0;
  std::size_t line_number = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_number;

    while (!line.empty() && IsSpace(line.back())) line.remove_suffix(1);
    if (line.empty()) {
      flush();
      continue;
    }
    std::vector<std::string_view> fields = SplitFields(line);
    if (fields.size() != 2) {
      throw Error(ErrorKind::kInvalidInput,
                  LineRef(line_number) + ": expected 2 fields, found " +
                      std::to_string(fields.size()));
    }
    if (fields[0].empty()) {
      throw Error(ErrorKind::kInvalidInput,
                  LineRef(line_number) + ": empty token");
    }
    std::optional<Label> label = ParseLabel(fields[1], scheme);
    if (!label) {
      throw Error(ErrorKind::kInvalidInput, LineRef(line_number) +
                                                ": unknown tag '" +
                                                std::string(fields[1]) + "'");
    }
    if (current.tokens.empty()) sentence_first_line = line_number;
    current.tokens.emplace_back(fields[0]);
    current.labels.push_back(*label);
  }
  flush();
  return result;
}

std::string SerializeCorpus(const Corpus& corpus) {
  std::string out;
  for (const TaggedSentence& sentence : corpus.sentences) {
    if (sentence.tokens.empty()) continue;
    for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
      out += sentence.tokens[i];
      out += '\t';
      out += LabelString(sentence.labels[i], corpus.scheme);
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

Corpus IoToBio(const Corpus& corpus) {
  if (corpus.scheme != Scheme::kIo) {
    ThrowInvalid("io_to_bio: corpus is already in the BIO scheme");
  }
  Corpus out = corpus;
  out.scheme = Scheme::kBio;
  for (TaggedSentence& sentence : out.sentences) {
    for (std::size_t i = 0; i < sentence.labels.size(); ++i) {
      Label& label = sentence.labels[i];
      if (label.IsOutside()) continue;
      bool continues = i > 0 && !sentence.labels[i - 1].IsOutside() &&
                       sentence.labels[i - 1].type == label.type;
      label.tag = continues ? Label::Tag::kInside : Label::Tag::kBegin;
    }
  }
  return out;
}

std::vector<EntityMention> SentenceMentions(const TaggedSentence& sentence,
                                            std::size_t sentence_index) {
  std::vector<EntityMention> mentions;
  const std::size_t n = sentence.labels.size();
  std::size_t i = 0;
  while (i < n) {
    Label label = sentence.labels[i];
    if (label.IsOutside()) {
      ++i;
      continue;
    }
    std::size_t end = i + 1;
    while (end < n && sentence.labels[end].tag == Label::Tag::kInside &&
           sentence.labels[end].type == label.type) {
      ++end;
    }
    EntityMention mention;
    mention.sentence_index = sentence_index;
    mention.start = i;
    mention.length = end - i;
    mention.type = label.type;
    mention.surface = JoinTokens(
        std::span<const std::string>(sentence.tokens).subspan(i, end - i));
    mentions.push_back(std::move(mention));
    i = end;
  }
  return mentions;
}

std::vector<EntityMention> ExtractMentions(const Corpus& corpus) {
  std::vector<EntityMention> mentions;
  for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
    std::vector<EntityMention> local = SentenceMentions(corpus.sentences[s], s);
    std::move(local.begin(), local.end(), std::back_inserter(mentions));
  }
  return mentions;
}

std::vector<Label> LabelsFromMentions(std::size_t n_tokens,
                                      std::span<const EntityMention> mentions) {
  std::vector<Label> labels(n_tokens, Label::O());
  for (const EntityMention& mention : mentions) {
    if (mention.length == 0 || mention.start + mention.length > n_tokens) {
      ThrowInvalid("mention span out of bounds");
    }
    labels[mention.start] = Label::B(mention.type);
    for (std::size_t k = 1; k < mention.length; ++k) {
      labels[mention.start + k] = Label::I(mention.type);
    }
  }
  return labels;
}

std::vector<std::string> SplitWhitespace(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && IsSpace(text[pos])) ++pos;
    std::size_t end = pos;
    while (end < text.size() && !IsSpace(text[end])) ++end;
    if (end > pos) tokens.emplace_back(text.substr(pos, end - pos));
    pos = end;
  }
  return tokens;
}

std::string JoinTokens(std::span<const std::string> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += ' ';
    out += tokens[i];
  }
  return out;
}

std::string NormalizeSurface(std::string_view surface) {
  return JoinTokens(SplitWhitespace(surface));
}

TypeInventories BuildTypeInventories(const Corpus& corpus) {
  TypeInventories inventories;
  for (const EntityMention& mention : ExtractMentions(corpus)) {
    inventories[mention.type].insert(NormalizeSurface(mention.surface));
  }
  return inventories;
}

MappingResult MapMissingAnnotations(const Corpus& corpus,
                                    const TypeInventories& inventories) {
  MappingResult result;
  result.corpus = corpus;
  const SurfaceMatcher matcher(inventories);
  std::array<std::size_t, kNumEntityTypes> before{};
  std::array<std::size_t, kNumEntityTypes> added{};

  for (TaggedSentence& sentence : result.corpus.sentences) {
    for (const EntityMention& mention : SentenceMentions(sentence)) {
      ++before[TypeIndex(mention.type)];
    }
    std::vector<bool> eligible(sentence.size());
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      eligible[i] = sentence.labels[i].IsOutside();
    }
    for (const SurfaceMatch& match : matcher.Match(sentence.tokens, eligible)) {
      sentence.labels[match.start] = Label::B(match.type);
      for (std::size_t k = 1; k < match.length; ++k) {
        sentence.labels[match.start + k] = Label::I(match.type);
      }
      ++added[TypeIndex(match.type)];
    }
  }

  auto fill = [](MappingReport::Row& row, std::size_t b, std::size_t a) {
    row.mentions_before = b;
    row.mentions_added = a;
    row.percent_increase =
        b > 0 ? 100.0 * static_cast<double>(a) / static_cast<double>(b) : 0.0;
  };
  std::size_t total_before = 0;
  std::size_t total_added = 0;
  for (std::size_t t = 0; t < kNumEntityTypes; ++t) {
    fill(result.report.per_type[t], before[t], added[t]);
    total_before += before[t];
    total_added += added[t];
  }
  fill(result.report.total, total_before, total_added);
  return result;
}

CorpusStats ComputeCorpusStats(const Corpus& corpus) {
  CorpusStats stats;
  stats.sentences = corpus.sentences.size();
  for (const TaggedSentence& sentence : corpus.sentences) {
    stats.tokens += sentence.tokens.size();
    for (const EntityMention& mention : SentenceMentions(sentence)) {
      ++stats.mentions[TypeIndex(mention.type)];
    }
  }
  return stats;
}

OverlapReport AnalyzeOverlap(const Corpus& train, const Corpus& test) {
  const TypeInventories train_inv = BuildTypeInventories(train);
  const TypeInventories test_inv = BuildTypeInventories(test);
  OverlapReport report;
  auto percent = [](std::size_t seen, std::size_t unique) {
    return unique > 0 ? 100.0 * static_cast<double>(seen) /
                            static_cast<double>(unique)
                      : 0.0;
  };
  for (EntityType type : kEntityTypes) {
    OverlapReport::Row& row = report.per_type[TypeIndex(type)];
    row.unique_test = test_inv[type].size();
    for (const std::string& surface : test_inv[type]) {
      if (train_inv[type].count(surface) > 0) ++row.seen_in_train;
    }
    row.percentage = percent(row.seen_in_train, row.unique_test);
    report.total.unique_test += row.unique_test;
    report.total.seen_in_train += row.seen_in_train;
  }
  report.total.percentage =
      percent(report.total.seen_in_train, report.total.unique_test);
  return report;
}

}  // namespace clusteraug

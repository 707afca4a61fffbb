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

#include "test_util.h"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

namespace clusteraug::testing {

std::vector<Span> OracleSpans(const std::vector<Label>& labels) {
  std::vector<Span> spans;
  std::size_t i = 0;
  while (i < labels.size()) {
    if (labels[i].tag != Label::Tag::kBegin) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < labels.size() && labels[j].tag == Label::Tag::kInside &&
           labels[j].type == labels[i].type) {
      ++j;
    }
    spans.emplace_back(i, j - i, TypeIndex(labels[i].type));
    i = j;
  }
  return spans;
}

std::vector<Label> RandomBioLabels(Rng& rng, std::size_t n) {
  std::vector<Label> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = UniformIndex(rng, 7);
    if (r < 3) continue;
    const EntityType t = kEntityTypes[UniformIndex(rng, 3)];
    const bool can_continue = i > 0 && !labels[i - 1].IsOutside() &&
                              labels[i - 1].type == t;
    labels[i] = (r >= 5 && can_continue) ? Label::I(t) : Label::B(t);
  }
  return labels;
}

std::string RandomToken(Rng& rng) {
  static const std::vector<std::string> kVocab = {
      "Ali",  "Khan",  "went", "to",    "Lahore", "the",  "bank", "of",
      "کراچی", "میں",  "ہے",   "نے",    "پاکستان", "x",   "y-z",  "3.14",
      "'s",   "\"q\"", "Ümit", "naïve", "a",      "bb",   "ccc",  "ddd"};
  return kVocab[UniformIndex(rng, kVocab.size())];
}

Corpus RandomCorpus(Rng& rng, const RandomCorpusOptions& options) {
  Corpus corpus;
  for (std::size_t s = 0; s < options.sentences; ++s) {
    const std::size_t n =
        options.min_tokens +
        UniformIndex(rng, options.max_tokens - options.min_tokens + 1);
    TaggedSentence sentence;
    for (std::size_t i = 0; i < n; ++i) sentence.tokens.push_back(RandomToken(rng));
    sentence.labels = RandomBioLabels(rng, n);
    corpus.sentences.push_back(std::move(sentence));
  }
  return corpus;
}

const std::vector<std::string>& Surfaces(EntityType type) {
  static const std::vector<std::string> kPer = {
      "Sartaj Aziz", "Madiha Khalid", "Imran",   "Nawaz Sharif",
      "Ayesha",      "Bilal Ahmed",   "Fatima Jinnah", "Zara"};
  static const std::vector<std::string> kLoc = {
      "Lahore", "Karachi", "Kabul", "New Delhi", "Quetta", "Swat Valley"};
  static const std::vector<std::string> kOrg = {
      "PTI", "State Bank", "Punjab University", "WAPDA", "Geo News"};
  switch (type) {
    case EntityType::kPer:
      return kPer;
    case EntityType::kLoc:
      return kLoc;
    case EntityType::kOrg:
      return kOrg;
  }
  return kPer;
}

const std::vector<std::string>& Fillers() {
  static const std::vector<std::string> kFillers = {
      "will", "visit", "today", "met", "in", "said", "that", "and",
      "from", "the",   "was",   "at",  "on", "with", "."};
  return kFillers;
}

TaggedSentence MakeSentence(const std::vector<Piece>& pieces) {
  TaggedSentence sentence;
  for (const Piece& piece : pieces) {
    const std::vector<std::string> tokens = SplitWhitespace(piece.text);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      sentence.tokens.push_back(tokens[i]);
      if (!piece.type) {
        sentence.labels.push_back(Label::O());
      } else {
        sentence.labels.push_back(i == 0 ? Label::B(*piece.type)
                                         : Label::I(*piece.type));
      }
    }
  }
  return sentence;
}

TaggedSentence RandomEntitySentence(Rng& rng, std::size_t max_mentions) {
  const std::size_t m = 1 + UniformIndex(rng, max_mentions);
  std::vector<Piece> pieces;
  const std::vector<std::string>& fillers = Fillers();
  auto add_fillers = [&](std::size_t min) {
    const std::size_t n = min + UniformIndex(rng, 3);
    for (std::size_t i = 0; i < n; ++i) {
      pieces.push_back({fillers[UniformIndex(rng, fillers.size())], {}});
    }
  };
  add_fillers(0);
  for (std::size_t i = 0; i < m; ++i) {
    const EntityType t = kEntityTypes[UniformIndex(rng, 3)];
    const std::vector<std::string>& pool = Surfaces(t);
    pieces.push_back({pool[UniformIndex(rng, pool.size())], t});
    add_fillers(1);
  }
  return MakeSentence(pieces);
}

PlantedClusters MakePlantedClusters(Rng& rng, std::size_t k, std::size_t dim,
                                    std::size_t per_cluster,
                                    double spread_degrees) {
  auto gaussian = [&rng]() {
    // Box-Muller on raw engine output keeps the fixture portable.
    const double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  };
  PlantedClusters out;
  const double max_angle = spread_degrees * M_PI / 180.0;
  for (std::size_t i = 0; i < per_cluster; ++i) {
    for (std::size_t c = 0; c < k; ++c) {
      // Random direction orthogonal to center e_c.
      std::vector<double> u(dim);
      double norm = 0.0;
      do {
        norm = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
          u[d] = d == c ? 0.0 : gaussian();
          norm += u[d] * u[d];
        }
      } while (norm < 1e-12);
      norm = std::sqrt(norm);
      const double angle =
          max_angle * static_cast<double>(rng() >> 11) * 0x1.0p-53;
      std::vector<double> p(dim);
      for (std::size_t d = 0; d < dim; ++d) p[d] = std::sin(angle) * u[d] / norm;
      p[c] += std::cos(angle);
      double pn = 0.0;
      for (double x : p) pn += x * x;
      pn = std::sqrt(pn);
      for (double& x : p) x /= pn;
      out.points.push_back(std::move(p));
      out.truth.push_back(c);
    }
  }
  return out;
}

double Purity(const std::vector<std::size_t>& assignment,
              const std::vector<std::size_t>& truth, std::size_t k) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> joint;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    ++joint[{assignment[i], truth[i]}];
  }
  std::size_t correct = 0;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t best = 0;
    for (const auto& [key, count] : joint) {
      if (key.first == c) best = std::max(best, count);
    }
    correct += best;
  }
  return assignment.empty() ? 1.0
                            : static_cast<double>(correct) / assignment.size();
}

AugFixture MakeAugFixture(std::uint64_t seed, std::size_t random_sentences) {
  AugFixture f;
  Rng rng(seed);
  const std::size_t dim = 8;
  f.table = EmbeddingTable(dim);
  for (EntityType type : kEntityTypes) {
    const std::vector<std::string>& pool = Surfaces(type);
    for (std::size_t i = 0; i < pool.size(); ++i) {
      // Two planted directions per type, alternating between surfaces.
      const std::size_t axis = TypeIndex(type) * 2 + (i % 2);
      std::vector<float> v(dim, 0.0f);
      v[axis] = 1.0f;
      for (float& x : v) x += static_cast<float>(rng() % 100) / 1000.0f;
      for (const std::string& token : SplitWhitespace(pool[i])) {
        if (!f.table.contains(token)) f.table.Insert(token, v);
      }
    }
    // One sentence per surface so every surface is in the inventory.
    for (const std::string& surface : pool) {
      f.corpus.sentences.push_back(
          MakeSentence({{"the", {}}, {surface, type}, {"said", {}}}));
    }
  }
  for (std::size_t i = 0; i < random_sentences; ++i) {
    f.corpus.sentences.push_back(RandomEntitySentence(rng, 3));
  }
  ClusterSpec spec;
  spec.seed = seed;
  f.artifacts = BuildClusterDictionaries(f.corpus, f.table, f.titles, spec);
  return f;
}

namespace {

std::string SpanText(const TaggedSentence& s, std::size_t start,
                     std::size_t len) {
  std::string out;
  for (std::size_t i = start; i < start + len; ++i) {
    if (i > start) out += " ";
    out += s.tokens[i];
  }
  return out;
}

}  // namespace

std::string CandidateViolation(const TaggedSentence& original,
                               const AugCandidate& candidate,
                               const ClusterArtifacts& artifacts) {
  const TaggedSentence& out = candidate.sentence;
  if (out.tokens.size() != out.labels.size()) return "token/label size mismatch";
  const std::vector<Span> before = OracleSpans(original.labels);
  const std::vector<Span> after = OracleSpans(out.labels);
  if (before.size() != after.size()) return "mention count changed";
  std::size_t prev_a = 0, prev_b = 0;
  std::size_t next_rep = 0;
  for (std::size_t m = 0; m <= before.size(); ++m) {
    const std::size_t start_a = m < before.size() ? std::get<0>(before[m])
                                                  : original.size();
    const std::size_t start_b = m < after.size() ? std::get<0>(after[m])
                                                 : out.size();
    if (start_a - prev_a != start_b - prev_b) return "filler length changed";
    for (std::size_t i = 0; i < start_a - prev_a; ++i) {
      if (original.tokens[prev_a + i] != out.tokens[prev_b + i]) {
        return "filler token changed";
      }
      if (!out.labels[prev_b + i].IsOutside()) return "filler relabeled";
    }
    if (m == before.size()) break;
    const auto [sa, la, ta] = before[m];
    const auto [sb, lb, tb] = after[m];
    if (ta != tb) return "mention type changed";
    const std::string source = SpanText(original, sa, la);
    const std::string now = SpanText(out, sb, lb);
    const EntityType type = kEntityTypes[ta];
    const Replacement* rep = nullptr;
    if (next_rep < candidate.replacements.size() &&
        candidate.replacements[next_rep].mention_index == m) {
      rep = &candidate.replacements[next_rep++];
    }
    if (rep == nullptr) {
      if (now != source) return "unrecorded replacement";
    } else {
      if (rep->source != source || rep->candidate != now) {
        return "replacement record disagrees with sentence";
      }
      std::optional<std::size_t> cluster;
      if (const auto& model = artifacts.model(type)) {
        auto it = model->members.find(source);
        if (it != model->members.end()) cluster = it->second;
      }
      std::set<std::string> allowed;
      if (cluster) {
        allowed = artifacts.clusters(type)[*cluster];
        if (rep->fallback) return "fallback although source is clustered";
      } else {
        allowed = artifacts.inventories[type];
      }
      if (!allowed.count(now)) return "replacement outside its cluster: " + now;
      if (now == source && allowed.size() > 1) return "avoidable self-replacement";
    }
    prev_a = sa + la;
    prev_b = sb + lb;
  }
  if (next_rep != candidate.replacements.size()) return "stray replacement record";
  return "";
}

std::string FakeTaggerPath() { return CLUSTERAUG_FAKE_TAGGER; }

std::string TempPath(const std::string& name) {
  static std::atomic<int> counter{0};
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() /
      ("clusteraug_test_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return (dir / (std::to_string(counter++) + "_" + name)).string();
}

std::string WriteTempFile(const std::string& name,
                          const std::string& contents) {
  const std::string path = TempPath(name);
  std::ofstream(path, std::ios::binary) << contents;
  return path;
}

}  // namespace clusteraug::testing

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

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "clusteraug/error.h"
#include "test_util.h"

namespace clusteraug {
namespace {

using testing::MakeSentence;
using testing::OracleSpans;

const EntityType kPer = EntityType::kPer;
const EntityType kLoc = EntityType::kLoc;
const EntityType kOrg = EntityType::kOrg;

TEST(LabelTest, StringsRoundTrip) {
  for (const std::string& s : BioLabelStrings()) {
    auto label = ParseLabel(s, Scheme::kBio);
    ASSERT_TRUE(label.has_value()) << s;
    EXPECT_EQ(LabelString(*label), s);
  }
  EXPECT_EQ(BioLabelStrings().size(), 7u);
  EXPECT_EQ(BioLabelStrings().front(), "O");
  EXPECT_FALSE(ParseLabel("B-MISC", Scheme::kBio).has_value());
  EXPECT_FALSE(ParseLabel("PER", Scheme::kBio).has_value());
  EXPECT_EQ(*ParseLabel("LOC", Scheme::kIo), Label::I(kLoc));
  EXPECT_EQ(LabelString(Label::I(kOrg), Scheme::kIo), "ORG");
}

TEST(ParseCorpusTest, MinimalInput) {
  ParseResult r = ParseCorpus("Ali B-PER\n\n", Scheme::kBio);
  ASSERT_EQ(r.corpus.size(), 1u);
  EXPECT_EQ(r.corpus.sentences[0].tokens, std::vector<std::string>{"Ali"});
  EXPECT_EQ(r.corpus.sentences[0].labels[0], Label::B(kPer));
}

TEST(ParseCorpusTest, TabsSpacesCrlfAndMissingFinalBlank) {
  ParseResult r =
      ParseCorpus("Ali\t B-PER\r\nKhan   I-PER \n\n\n\nwent\tO", Scheme::kBio);
  ASSERT_EQ(r.corpus.size(), 2u);
  EXPECT_EQ(r.corpus.sentences[0].size(), 2u);
  EXPECT_EQ(r.corpus.sentences[1].labels[0], Label::O());
}

TEST(ParseCorpusTest, LenientRepairsOrphanInside) {
  ParseResult r = ParseCorpus("a O\nb I-LOC\n\n", Scheme::kBio, ParseMode::kLenient);
  EXPECT_EQ(r.corpus.sentences[0].labels,
            (std::vector<Label>{Label::O(), Label::B(kLoc)}));
  EXPECT_FALSE(r.warnings.empty());
}

TEST(ParseCorpusTest, StrictRejectsOrphanInside) {
  EXPECT_THROW(ParseCorpus("a O\nb I-LOC\n\n", Scheme::kBio), Error);
  // Type change without B- is also illegal.
  EXPECT_THROW(ParseCorpus("a B-PER\nb I-LOC\n\n", Scheme::kBio), Error);
}

TEST(ParseCorpusTest, MalformedLines) {
  EXPECT_THROW(ParseCorpus("Ali\n\n", Scheme::kBio), Error);
  EXPECT_THROW(ParseCorpus("Ali B-PER extra\n\n", Scheme::kBio), Error);
  EXPECT_THROW(ParseCorpus("Ali B-XYZ\n\n", Scheme::kBio), Error);
  EXPECT_THROW(ParseCorpus("\tB-PER\n\n", Scheme::kBio), Error);
  try {
    ParseCorpus("a O\nb O\nc Q\n", Scheme::kBio);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidInput);
    EXPECT_NE(std::string(e.what()).find("3"), std::string::npos) << e.what();
  }
}

TEST(SerializeCorpusTest, EmptyAndSingle) {
  EXPECT_EQ(SerializeCorpus(Corpus{}), "");
  Corpus c;
  c.sentences.push_back({{"Ali"}, {Label::B(kPer)}});
  EXPECT_EQ(SerializeCorpus(c), "Ali\tB-PER\n\n");
}

TEST(SerializeCorpusTest, RandomRoundTrip) {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    Corpus c = testing::RandomCorpus(rng, {.sentences = 20});
    const std::string text = SerializeCorpus(c);
    ParseResult r = ParseCorpus(text, Scheme::kBio);
    ASSERT_EQ(r.corpus.sentences, c.sentences);
    EXPECT_EQ(SerializeCorpus(r.corpus), text);
  }
}

TEST(IoToBioTest, Examples) {
  Corpus io;
  io.scheme = Scheme::kIo;
  io.sentences.push_back({{"a", "b", "c"},
                          {Label::I(kPer), Label::I(kPer), Label::O()}});
  io.sentences.push_back({{"a", "b", "c", "d"},
                          {Label::O(), Label::I(kLoc), Label::O(), Label::I(kLoc)}});
  io.sentences.push_back({{"a"}, {Label::O()}});
  Corpus bio = IoToBio(io);
  EXPECT_EQ(bio.scheme, Scheme::kBio);
  EXPECT_EQ(bio.sentences[0].labels,
            (std::vector<Label>{Label::B(kPer), Label::I(kPer), Label::O()}));
  EXPECT_EQ(bio.sentences[1].labels,
            (std::vector<Label>{Label::O(), Label::B(kLoc), Label::O(),
                                Label::B(kLoc)}));
  EXPECT_EQ(bio.sentences[2].labels, std::vector<Label>{Label::O()});
  EXPECT_THROW(IoToBio(bio), Error);
}

TEST(IoToBioTest, AdjacentDifferentTypesSplit) {
  Corpus io;
  io.scheme = Scheme::kIo;
  io.sentences.push_back({{"a", "b"}, {Label::I(kPer), Label::I(kOrg)}});
  EXPECT_EQ(IoToBio(io).sentences[0].labels,
            (std::vector<Label>{Label::B(kPer), Label::B(kOrg)}));
}

TEST(MentionsTest, Examples) {
  TaggedSentence s{{"Sartaj", "Aziz", "went"},
                   {Label::B(kPer), Label::I(kPer), Label::O()}};
  auto m = SentenceMentions(s, 4);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0], (EntityMention{4, 0, 2, kPer, "Sartaj Aziz"}));
  TaggedSentence two{{"a", "b"}, {Label::B(kPer), Label::B(kPer)}};
  auto m2 = SentenceMentions(two);
  ASSERT_EQ(m2.size(), 2u);
  EXPECT_EQ(m2[0].length, 1u);
  EXPECT_EQ(m2[1].start, 1u);
}

TEST(MentionsTest, MatchesLabelScanOracle) {
  Rng rng(5);
  Corpus c = testing::RandomCorpus(rng, {.sentences = 500});
  std::size_t expected = 0;
  for (std::size_t s = 0; s < c.size(); ++s) {
    const auto& sent = c.sentences[s];
    auto spans = OracleSpans(sent.labels);
    auto mentions = SentenceMentions(sent, s);
    ASSERT_EQ(mentions.size(), spans.size());
    for (std::size_t i = 0; i < spans.size(); ++i) {
      EXPECT_EQ(mentions[i].start, std::get<0>(spans[i]));
      EXPECT_EQ(mentions[i].length, std::get<1>(spans[i]));
      EXPECT_EQ(TypeIndex(mentions[i].type), std::get<2>(spans[i]));
    }
    EXPECT_EQ(LabelsFromMentions(sent.size(), mentions), sent.labels);
    expected += spans.size();
  }
  EXPECT_EQ(ExtractMentions(c).size(), expected);
}

TEST(RepairBioTest, RewritesOrphans) {
  std::vector<Label> labels = {Label::I(kPer), Label::I(kPer), Label::I(kLoc),
                               Label::O(), Label::I(kOrg)};
  EXPECT_FALSE(IsValidBio(labels));
  EXPECT_EQ(RepairBio(labels), 3u);
  EXPECT_TRUE(IsValidBio(labels));
  EXPECT_EQ(labels, (std::vector<Label>{Label::B(kPer), Label::I(kPer),
                                        Label::B(kLoc), Label::O(),
                                        Label::B(kOrg)}));
}

TEST(InventoryTest, DeduplicatesAndMatchesSetOracle) {
  Corpus c;
  c.sentences.push_back(MakeSentence({{"Ali", kPer}, {"and", {}}, {"Ali", kPer}}));
  TypeInventories inv = BuildTypeInventories(c);
  EXPECT_EQ(inv[kPer], std::set<std::string>{"Ali"});
  EXPECT_TRUE(inv[kLoc].empty());
  TypeInventories empty = BuildTypeInventories(Corpus{});
  for (EntityType t : kEntityTypes) EXPECT_TRUE(empty[t].empty());

  Rng rng(9);
  Corpus r = testing::RandomCorpus(rng, {.sentences = 300});
  std::array<std::set<std::string>, 3> oracle;
  for (const auto& s : r.sentences) {
    for (const auto& [start, len, type] : OracleSpans(s.labels)) {
      std::string surface;
      for (std::size_t i = start; i < start + len; ++i) {
        if (i > start) surface += " ";
        surface += s.tokens[i];
      }
      oracle[type].insert(surface);
    }
  }
  TypeInventories got = BuildTypeInventories(r);
  for (std::size_t t = 0; t < 3; ++t) EXPECT_EQ(got.surfaces[t], oracle[t]);
}

TEST(MappingTest, LabelsUnannotatedOccurrence) {
  TypeInventories inv;
  inv[kPer].insert("Sartaj Aziz");
  Corpus c;
  c.sentences.push_back(
      MakeSentence({{"Foreign advisor", {}}, {"Sartaj Aziz", {}}, {"spoke", {}}}));
  MappingResult r = MapMissingAnnotations(c, inv);
  EXPECT_EQ(r.corpus.sentences[0].labels,
            (std::vector<Label>{Label::O(), Label::O(), Label::B(kPer),
                                Label::I(kPer), Label::O()}));
  EXPECT_EQ(r.report.per_type[0].mentions_added, 1u);
}

TEST(MappingTest, NeverTouchesExistingLabels) {
  TypeInventories inv;
  inv[kLoc].insert("Lahore Fort");
  inv[kPer].insert("Lahore");
  Corpus c;
  // "Lahore" is already an ORG word here; "Fort" alone matches nothing.
  c.sentences.push_back(MakeSentence({{"Lahore", kOrg}, {"Fort", {}}}));
  MappingResult r = MapMissingAnnotations(c, inv);
  EXPECT_EQ(r.corpus.sentences[0].labels, c.sentences[0].labels);
  EXPECT_EQ(r.report.total.mentions_added, 0u);
}

TEST(MappingTest, LongestMatchWinsThenTypePriority) {
  TypeInventories inv;
  inv[kLoc].insert("New Delhi");
  inv[kOrg].insert("Delhi");
  inv[kOrg].insert("Geo");
  inv[kPer].insert("Geo");
  Corpus c;
  c.sentences.push_back(MakeSentence({{"in New Delhi Geo", {}}}));
  MappingResult r = MapMissingAnnotations(c, inv);
  EXPECT_EQ(r.corpus.sentences[0].labels,
            (std::vector<Label>{Label::O(), Label::B(kLoc), Label::I(kLoc),
                                Label::B(kPer)}));
}

TEST(StatsTest, EmptyAndCrossCheck) {
  CorpusStats empty = ComputeCorpusStats(Corpus{});
  EXPECT_EQ(empty.sentences, 0u);
  EXPECT_EQ(empty.tokens, 0u);
  EXPECT_EQ(empty.total_mentions(), 0u);

  Rng rng(3);
  Corpus c = testing::RandomCorpus(rng, {.sentences = 200});
  CorpusStats stats = ComputeCorpusStats(c);
  std::array<std::size_t, 3> by_type{};
  for (const EntityMention& m : ExtractMentions(c)) ++by_type[TypeIndex(m.type)];
  EXPECT_EQ(stats.mentions, by_type);
  EXPECT_EQ(stats.sentences, 200u);
}

TEST(OverlapTest, PlantedAndDisjoint) {
  Corpus train;
  train.sentences.push_back(MakeSentence(
      {{"Ali", kPer}, {"met", {}}, {"Zara", kPer}, {"and", {}}, {"Bilal", kPer}}));
  Corpus test;
  test.sentences.push_back(MakeSentence({{"Ali", kPer}, {"met", {}}, {"Zara", kPer}}));
  test.sentences.push_back(MakeSentence({{"Bilal", kPer}, {"met", {}}, {"Omar", kPer}}));
  test.sentences.push_back(MakeSentence({{"Ali", kPer}}));
  OverlapReport r = AnalyzeOverlap(train, test);
  EXPECT_EQ(r.per_type[0].unique_test, 4u);
  EXPECT_EQ(r.per_type[0].seen_in_train, 3u);
  EXPECT_DOUBLE_EQ(r.per_type[0].percentage, 75.0);

  Corpus other;
  other.sentences.push_back(MakeSentence({{"Kabul", kLoc}}));
  OverlapReport d = AnalyzeOverlap(other, test);
  EXPECT_EQ(d.per_type[0].seen_in_train, 0u);
  EXPECT_DOUBLE_EQ(d.per_type[0].percentage, 0.0);
  EXPECT_DOUBLE_EQ(d.per_type[1].percentage, 0.0);
}

TEST(TextTest, SplitJoinNormalize) {
  EXPECT_EQ(SplitWhitespace("  a \t b\n"), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(NormalizeSurface("  Sartaj \t Aziz "), "Sartaj Aziz");
  std::vector<std::string> t = {"x", "y"};
  EXPECT_EQ(JoinTokens(t), "x y");
}

}  // namespace
}  // namespace clusteraug

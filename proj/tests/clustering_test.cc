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

#include "clusteraug/clustering.h"

#include <gtest/gtest.h>

#include "clusteraug/error.h"
#include "clusteraug/parallel.h"
#include "test_util.h"

namespace clusteraug {
namespace {

using testing::MakeSentence;

const EntityType kPer = EntityType::kPer;
const EntityType kLoc = EntityType::kLoc;
const EntityType kOrg = EntityType::kOrg;

void Put(EmbeddingTable& t, const std::string& w, std::vector<float> v) {
  t.Insert(w, v);
}

// Feminine first names point near e0, masculine near e1; surnames carry
// their own direction so that only the first token matters for PER.
struct GenderFixture {
  Corpus corpus;
  EmbeddingTable table{4};
  TitleList titles;

  GenderFixture() {
    const std::vector<std::string> feminine = {"Madiha", "Ayesha", "Fatima",
                                               "Zara", "Hina"};
    const std::vector<std::string> masculine = {"Imran", "Bilal", "Khalid",
                                                "Nawaz", "Omar"};
    for (std::size_t i = 0; i < feminine.size(); ++i) {
      Put(table, feminine[i], {1.0f, 0.05f * i, 0.0f, 0.0f});
      Put(table, masculine[i], {0.05f * i, 1.0f, 0.0f, 0.0f});
    }
    Put(table, "Lahore", {0, 0, 1, 0});
    Put(table, "Karachi", {0, 0, 1, 0.1f});
    Put(table, "Kabul", {0, 0, 0.1f, 1});
    Put(table, "Quetta", {0, 0, 0, 1});
    titles.titles = {"Chaudhry"};
    // "Madiha Khalid": feminine first name followed by a masculine one.
    corpus.sentences.push_back(MakeSentence(
        {{"Madiha Khalid", kPer}, {"met", {}}, {"Imran", kPer}, {"in", {}},
         {"Lahore", kLoc}}));
    corpus.sentences.push_back(MakeSentence(
        {{"Ayesha", kPer}, {"and", {}}, {"Chaudhry Bilal", kPer}, {"left", {}},
         {"Karachi", kLoc}}));
    corpus.sentences.push_back(MakeSentence(
        {{"Fatima", kPer}, {"and", {}}, {"Zara", kPer}, {"and", {}},
         {"Nawaz", kPer}, {"and", {}}, {"Hina", kPer}, {"and", {}},
         {"Omar", kPer}, {"in", {}}, {"Kabul", kLoc}, {"and", {}},
         {"Quetta", kLoc}, {"and", {}}, {"Unknownville", kLoc}}));
  }
};

ClusterSpec Spec() {
  ClusterSpec spec;
  spec.k = {2, 2, 10};
  spec.seed = 77;
  return spec;
}

TEST(ClusteringTest, DefaultsArePerTwoLocTwoOrgTen) {
  ClusterSpec spec;
  EXPECT_EQ(spec.k, (std::array<std::size_t, 3>{2, 2, 10}));
  EXPECT_EQ(spec.repetitions, 25u);
}

TEST(ClusteringTest, GenderSeparablePersonsArePure) {
  GenderFixture f;
  ClusterArtifacts a = BuildClusterDictionaries(f.corpus, f.table, f.titles, Spec());
  ASSERT_TRUE(a.model(kPer));
  const auto& members = a.model(kPer)->members;
  const std::size_t fem = members.at("Ayesha");
  const std::size_t masc = members.at("Imran");
  EXPECT_NE(fem, masc);
  for (const char* s : {"Madiha Khalid", "Fatima", "Zara", "Hina"}) {
    EXPECT_EQ(members.at(s), fem) << s;
  }
  for (const char* s : {"Chaudhry Bilal", "Nawaz", "Omar"}) {
    EXPECT_EQ(members.at(s), masc) << s;
  }
  // No ORG mentions: no model and an empty dictionary, no error.
  EXPECT_FALSE(a.model(kOrg));
  EXPECT_TRUE(a.clusters(kOrg).empty());
  // A LOC without any vector is reported, not clustered.
  EXPECT_EQ(a.unvectorizable[TypeIndex(kLoc)], std::set<std::string>{"Unknownville"});
}

TEST(ClusteringTest, AlignFeminineNameToFeminineCluster) {
  GenderFixture f;
  ClusterArtifacts a = BuildClusterDictionaries(f.corpus, f.table, f.titles, Spec());
  EntityMention source{0, 0, 2, kPer, "Madiha Khalid"};
  AlignedPool pool = Align(source, a, &f.table, f.titles);
  ASSERT_TRUE(pool.cluster_id);
  EXPECT_FALSE(pool.fallback);
  EXPECT_EQ(pool.candidates,
            (std::vector<std::string>{"Ayesha", "Fatima", "Hina", "Zara"}));
  // Stored membership gives the same answer without the table.
  AlignedPool stored = Align(source, a, nullptr, f.titles);
  EXPECT_EQ(stored.candidates, pool.candidates);
}

TEST(ClusteringTest, AlignMatchesFilterOracle) {
  GenderFixture f;
  ClusterArtifacts a = BuildClusterDictionaries(f.corpus, f.table, f.titles, Spec());
  for (EntityType type : {kPer, kLoc}) {
    const ClusterModel& model = *a.model(type);
    for (const auto& [surface, id] : model.members) {
      AlignedPool pool =
          Align({0, 0, 1, type, surface}, a, &f.table, f.titles);
      std::vector<std::string> expected;
      for (const auto& [other, other_id] : model.members) {
        if (other_id == id && other != surface) expected.push_back(other);
      }
      EXPECT_EQ(pool.candidates, expected) << surface;
      EXPECT_EQ(*pool.cluster_id, id);
    }
  }
}

TEST(ClusteringTest, MembersAgreeWithAssign) {
  GenderFixture f;
  ClusterArtifacts a = BuildClusterDictionaries(f.corpus, f.table, f.titles, Spec());
  for (EntityType type : {kPer, kLoc}) {
    const ClusterModel& model = *a.model(type);
    for (const auto& [surface, id] : model.members) {
      auto v = EntityFeatureVector(surface, type, f.table, f.titles);
      ASSERT_TRUE(v);
      EXPECT_EQ(model.Assign(v->vector), id) << surface;
    }
  }
}

TEST(ClusteringTest, SingletonClusterGivesEmptyPool) {
  Corpus c;
  c.sentences.push_back(MakeSentence({{"Lahore", kLoc}, {"and", {}}, {"Kabul", kLoc}}));
  EmbeddingTable t(2);
  Put(t, "Lahore", {1, 0});
  Put(t, "Kabul", {0, 1});
  ClusterArtifacts a = BuildClusterDictionaries(c, t, {}, Spec());
  AlignedPool pool = Align({0, 0, 1, kLoc, "Lahore"}, a, &t, {});
  EXPECT_TRUE(pool.candidates.empty());
  EXPECT_FALSE(pool.fallback);
}

TEST(ClusteringTest, UnvectorizableSourceFallsBackToInventory) {
  GenderFixture f;
  ClusterArtifacts a = BuildClusterDictionaries(f.corpus, f.table, f.titles, Spec());
  AlignedPool pool = Align({0, 0, 1, kLoc, "Unknownville"}, a, &f.table, f.titles);
  EXPECT_TRUE(pool.fallback);
  EXPECT_FALSE(pool.cluster_id);
  EXPECT_EQ(pool.candidates.size(), 4u);
}

TEST(ClusteringTest, FewerVectorsThanKLowersK) {
  Corpus c;
  c.sentences.push_back(MakeSentence({{"PTI", kOrg}, {"and", {}}, {"WAPDA", kOrg}}));
  EmbeddingTable t(2);
  Put(t, "PTI", {1, 0});
  Put(t, "WAPDA", {0, 1});
  ClusterArtifacts a = BuildClusterDictionaries(c, t, {}, Spec());
  ASSERT_TRUE(a.model(kOrg));
  EXPECT_EQ(a.model(kOrg)->k, 1u);
  EXPECT_FALSE(a.warnings.empty());
}

TEST(ClusteringTest, DeterministicAcrossThreads) {
  GenderFixture f;
  SetNumThreads(1);
  const std::string one =
      ClusterArtifactsToJson(BuildClusterDictionaries(f.corpus, f.table, f.titles, Spec()));
  SetNumThreads(4);
  const std::string four =
      ClusterArtifactsToJson(BuildClusterDictionaries(f.corpus, f.table, f.titles, Spec()));
  SetNumThreads(HardwareThreads());
  EXPECT_EQ(one, four);
}

TEST(ClusteringTest, JsonRoundTrip) {
  GenderFixture f;
  ClusterArtifacts a = BuildClusterDictionaries(f.corpus, f.table, f.titles, Spec());
  const std::string text = ClusterArtifactsToJson(a);
  ClusterArtifacts b = ClusterArtifactsFromJson(text);
  EXPECT_EQ(ClusterArtifactsToJson(b), text);
  for (EntityType t : kEntityTypes) {
    EXPECT_EQ(a.clusters(t), b.clusters(t));
    EXPECT_EQ(a.inventories[t], b.inventories[t]);
    EXPECT_EQ(a.model(t).has_value(), b.model(t).has_value());
    if (a.model(t)) {
      EXPECT_EQ(a.model(t)->centroids, b.model(t)->centroids);
      EXPECT_EQ(a.model(t)->members, b.model(t)->members);
    }
  }
}

TEST(ClusteringTest, SchemaMismatchIsTyped) {
  for (const char* text :
       {"{}", "not json", R"({"format":"clusteraug-clusters","version":99,"types":[]})",
        R"({"format":"other","version":1,"types":[]})"}) {
    try {
      ClusterArtifactsFromJson(text);
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kSchema) << text;
    }
  }
}

}  // namespace
}  // namespace clusteraug

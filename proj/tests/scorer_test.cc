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

#include "clusteraug/scorer.h"

#include <gtest/gtest.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include "clusteraug/error.h"
#include "clusteraug/parallel.h"
#include "test_util.h"

namespace clusteraug {
namespace {

using testing::MakeSentence;

const EntityType kPer = EntityType::kPer;
const EntityType kLoc = EntityType::kLoc;

std::vector<std::string> Tokens(const std::string& text) {
  return SplitWhitespace(text);
}

ExternalScorer Fake(const std::string& mode, bool lenient = false,
                    int timeout_ms = 10000) {
  ExternalScorerOptions options;
  options.endpoint.command = testing::FakeTaggerPath() + " " + mode;
  options.endpoint.timeout = std::chrono::milliseconds(timeout_ms);
  options.lenient = lenient;
  return ExternalScorer(std::move(options));
}

ErrorKind KindOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kInvalidInput;
}

// Mirror of the fake tagger's "rule" mode.
std::vector<Label> RuleLabels(const std::vector<std::string>& tokens) {
  std::vector<Label> out;
  auto cap = [](const std::string& t) { return !t.empty() && std::isupper(t[0]); };
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!cap(tokens[i])) {
      out.push_back(Label::O());
    } else {
      out.push_back(i > 0 && cap(tokens[i - 1]) ? Label::I(kPer) : Label::B(kPer));
    }
  }
  return out;
}

TEST(GazetteerTaggerTest, TagsCompiledSurfaces) {
  Corpus train;
  train.sentences.push_back(MakeSentence({{"Sartaj Aziz", kPer}, {"in", {}}, {"Kabul", kLoc}}));
  GazetteerTagger tagger(train);
  EXPECT_EQ(tagger.Tag(Tokens("advisor Sartaj Aziz went to Kabul")),
            (std::vector<Label>{Label::O(), Label::B(kPer), Label::I(kPer),
                                Label::O(), Label::O(), Label::B(kLoc)}));
  EXPECT_EQ(tagger.Tag(Tokens("nothing here")),
            (std::vector<Label>{Label::O(), Label::O()}));
  EXPECT_TRUE(tagger.Tag({}).empty());
}

TEST(GazetteerTaggerTest, EmptyCorpusRejected) {
  EXPECT_THROW(GazetteerTagger(Corpus{}), Error);
}

TEST(GazetteerTaggerTest, BatchEqualsSingleAcrossThreads) {
  Corpus train;
  Rng rng(4);
  for (int i = 0; i < 50; ++i) train.sentences.push_back(testing::RandomEntitySentence(rng, 3));
  GazetteerTagger tagger(train);
  std::vector<std::vector<std::string>> batch;
  for (int i = 0; i < 200; ++i) batch.push_back(testing::RandomEntitySentence(rng, 4).tokens);
  std::vector<std::vector<Label>> single;
  for (const auto& t : batch) single.push_back(tagger.Tag(t));
  for (int threads : {1, 3}) {
    SetNumThreads(threads);
    EXPECT_EQ(tagger.TagBatch(batch), single);
  }
  SetNumThreads(HardwareThreads());
}

TEST(ExternalScorerTest, AllOAccepted) {
  ExternalScorer scorer = Fake("all-o");
  EXPECT_EQ(scorer.Tag(Tokens("a b c")),
            (std::vector<Label>{Label::O(), Label::O(), Label::O()}));
}

TEST(ExternalScorerTest, WrongLengthIsContractViolation) {
  ExternalScorer scorer = Fake("wrong-length");
  EXPECT_EQ(KindOf([&] { scorer.Tag(Tokens("a b c")); }), ErrorKind::kContract);
}

TEST(ExternalScorerTest, ErrorRecordIsContractViolation) {
  ExternalScorer scorer = Fake("error");
  EXPECT_EQ(KindOf([&] { scorer.Tag(Tokens("a b")); }), ErrorKind::kContract);
}

TEST(ExternalScorerTest, UnknownIdIsContractViolation) {
  ExternalScorer scorer = Fake("bad-id");
  EXPECT_EQ(KindOf([&] { scorer.Tag(Tokens("a b")); }), ErrorKind::kContract);
}

TEST(ExternalScorerTest, OrphanAndUnknownLabelsRespectLeniency) {
  ExternalScorer strict = Fake("orphan");
  EXPECT_EQ(KindOf([&] { strict.Tag(Tokens("Ali x")); }), ErrorKind::kContract);
  ExternalScorer lenient = Fake("orphan", true);
  EXPECT_EQ(lenient.Tag(Tokens("Ali x")),
            (std::vector<Label>{Label::B(kPer), Label::O()}));
  ExternalScorer unknown_strict = Fake("unknown");
  EXPECT_EQ(KindOf([&] { unknown_strict.Tag(Tokens("x")); }), ErrorKind::kContract);
  ExternalScorer unknown_lenient = Fake("unknown", true);
  EXPECT_EQ(unknown_lenient.Tag(Tokens("x")), std::vector<Label>{Label::O()});
}

TEST(ExternalScorerTest, CrashIsTransportError) {
  ExternalScorer scorer = Fake("crash");
  EXPECT_EQ(KindOf([&] { scorer.Tag(Tokens("x")); }), ErrorKind::kTransport);
}

TEST(ExternalScorerTest, SilentPeerTimesOut) {
  ExternalScorer scorer = Fake("silent", false, 200);
  EXPECT_EQ(KindOf([&] { scorer.Tag(Tokens("x")); }), ErrorKind::kTimeout);
}

TEST(ExternalScorerTest, RespawnsAfterPeerDies) {
  // The flaky peer answers once and exits; the client relaunches it.
  ExternalScorer scorer = Fake("flaky");
  EXPECT_EQ(scorer.Tag(Tokens("a")), std::vector<Label>{Label::O()});
  EXPECT_THROW(scorer.Tag(Tokens("b")), Error);
  EXPECT_EQ(scorer.Tag(Tokens("c")), std::vector<Label>{Label::O()});
}

TEST(ExternalScorerTest, ShuffledThousandRequestBatchKeepsCorrelation) {
  ExternalScorer scorer = Fake("shuffle");
  Rng rng(1000);
  std::vector<std::vector<std::string>> batch;
  for (int i = 0; i < 1000; ++i) {
    std::vector<std::string> tokens;
    const std::size_t n = 1 + UniformIndex(rng, 12);
    for (std::size_t j = 0; j < n; ++j) tokens.push_back(testing::RandomToken(rng));
    batch.push_back(std::move(tokens));
  }
  std::vector<std::vector<Label>> got = scorer.TagBatch(batch);
  ASSERT_EQ(got.size(), batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    ASSERT_EQ(got[i], RuleLabels(batch[i])) << i;
  }
  // A second batch on the same channel uses fresh ids.
  EXPECT_EQ(scorer.TagBatch(batch), got);
}

TEST(ExternalScorerTest, ConcurrentCallersShareOneChannel) {
  ExternalScorer scorer = Fake("rule");
  std::vector<std::thread> threads;
  std::atomic<int> failures{0};
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      Rng rng(t);
      for (int i = 0; i < 50; ++i) {
        std::vector<std::string> tokens = {testing::RandomToken(rng),
                                           testing::RandomToken(rng)};
        if (scorer.Tag(tokens) != RuleLabels(tokens)) ++failures;
      }
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(failures.load(), 0);
}

TEST(ExternalScorerTest, TcpEndpoint) {
  const std::string port_file = testing::TempPath("port");
  const std::string cmd =
      testing::FakeTaggerPath() + " rule --port-file " + port_file + " &";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  for (int i = 0; i < 500 && !std::filesystem::exists(port_file); ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  ASSERT_TRUE(std::filesystem::exists(port_file));
  int port = 0;
  std::ifstream(port_file) >> port;
  ExternalScorerOptions options;
  options.endpoint.address = "127.0.0.1:" + std::to_string(port);
  ExternalScorer scorer(std::move(options));
  EXPECT_EQ(scorer.Tag(Tokens("Sartaj Aziz went")),
            (std::vector<Label>{Label::B(kPer), Label::I(kPer), Label::O()}));
}

TEST(ExternalScorerTest, BadEndpointsAreTransportErrors) {
  ExternalScorerOptions closed;
  closed.endpoint.address = "127.0.0.1:1";
  ExternalScorer scorer(std::move(closed));
  EXPECT_EQ(KindOf([&] { scorer.Tag(Tokens("x")); }), ErrorKind::kTransport);
  EXPECT_THROW(
      {
        ExternalScorer unset{ExternalScorerOptions{}};
        unset.Tag(Tokens("x"));
      },
      Error);
}

}  // namespace
}  // namespace clusteraug

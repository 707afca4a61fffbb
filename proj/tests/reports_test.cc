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

#include "clusteraug/reports.h"

#include <gtest/gtest.h>

#include "json.hpp"

namespace clusteraug {
namespace {

TEST(ReportsTest, Thousands) {
  EXPECT_EQ(WithThousands(0), "0");
  EXPECT_EQ(WithThousands(999), "999");
  EXPECT_EQ(WithThousands(6839), "6,839");
  EXPECT_EQ(WithThousands(1234567), "1,234,567");
}

TEST(ReportsTest, Percent) {
  EXPECT_EQ(FormatPercent(75.0), "75.0");
  EXPECT_EQ(FormatPercent(82.2), "82.2");
  EXPECT_EQ(FormatPercent(48.594), "48.59");
  EXPECT_EQ(FormatPercent(0.0), "0.0");
  EXPECT_EQ(FormatPercent(100.0), "100.0");
}

TEST(ReportsTest, StatsTableRows) {
  CorpusStats stats;
  stats.sentences = 20000;
  stats.tokens = 123456;
  stats.mentions = {6839, 10, 0};
  const std::string table = FormatStatsTable(stats);
  EXPECT_NE(table.find("PER"), std::string::npos);
  EXPECT_NE(table.find("6,839"), std::string::npos);
  EXPECT_NE(table.find("# Sents."), std::string::npos);
  EXPECT_NE(table.find("20,000"), std::string::npos);
  auto doc = nlohmann::json::parse(StatsToJson(stats));
  EXPECT_EQ(doc["mentions"]["PER"], 6839);
  EXPECT_EQ(doc["sentences"], 20000);
}

TEST(ReportsTest, OverlapCell) {
  OverlapReport r;
  r.per_type[0] = {309, 254, 100.0 * 254 / 309};
  const std::string table = FormatOverlapTable(r);
  EXPECT_NE(table.find("254, 82.2%"), std::string::npos) << table;
  EXPECT_NE(table.find("0, 0.0%"), std::string::npos) << table;
  auto doc = nlohmann::json::parse(OverlapToJson(r));
  EXPECT_EQ(doc["per_type"]["PER"]["seen_in_train"], 254);
}

TEST(ReportsTest, MappingTable) {
  MappingReport r;
  r.per_type[1] = {80, 20, 25.0};
  r.total = {80, 20, 25.0};
  const std::string table = FormatMappingTable(r);
  EXPECT_NE(table.find("25.0%"), std::string::npos) << table;
  auto doc = nlohmann::json::parse(MappingToJson(r));
  EXPECT_EQ(doc["per_type"]["LOC"]["mentions_added"], 20);
}

}  // namespace
}  // namespace clusteraug

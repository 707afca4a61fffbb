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

#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace clusteraug {

namespace {

std::string Pad(const std::string& text, std::size_t width) {
  return text.size() >= width ? text : text + std::string(width - text.size(), ' ');
}

std::string RightPad(const std::string& text, std::size_t width) {
  return text.size() >= width ? text : std::string(width - text.size(), ' ') + text;
}

}  // namespace

std::string WithThousands(std::size_t value) {
  std::string digits = std::to_string(value);
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i > 0 && (digits.size() - i) % 3 == 0) out += ',';
    out += digits[i];
  }
  return out;
}

std::string FormatPercent(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", value);
  std::string s = buf;
  if (s.size() > 1 && s.back() == '0') s.pop_back();
  return s;
}

std::string FormatStatsTable(const CorpusStats& stats) {
  std::string out = Pad("Type", 10) + RightPad("Count", 12) + "\n";
  for (EntityType type : kEntityTypes) {
    out += Pad(std::string(EntityTypeName(type)), 10) +
           RightPad(WithThousands(stats.mentions[TypeIndex(type)]), 12) + "\n";
  }
  out += Pad("# Sents.", 10) + RightPad(WithThousands(stats.sentences), 12) +
         "\n";
  out += Pad("# Tokens", 10) + RightPad(WithThousands(stats.tokens), 12) +
         "\n";
  return out;
}

std::string StatsToJson(const CorpusStats& stats) {
  nlohmann::ordered_json doc;
  nlohmann::ordered_json mentions;
  for (EntityType type : kEntityTypes) {
    mentions[std::string(EntityTypeName(type))] =
        stats.mentions[TypeIndex(type)];
  }
  doc["mentions"] = std::move(mentions);
  doc["total_mentions"] = stats.total_mentions();
  doc["sentences"] = stats.sentences;
  doc["tokens"] = stats.tokens;
  doc["counting"] = "mentions";
  return doc.dump(2) + "\n";
}

std::string FormatOverlapTable(const OverlapReport& report) {
  auto cell = [](const OverlapReport::Row& row) {
    return WithThousands(row.seen_in_train) + ", " +
           FormatPercent(row.percentage) + "%";
  };
  std::string out = Pad("Type", 8) + Pad("Seen, %", 18) + "Unique test\n";
  for (EntityType type : kEntityTypes) {
    const OverlapReport::Row& row = report.per_type[TypeIndex(type)];
    out += Pad(std::string(EntityTypeName(type)), 8) + Pad(cell(row), 18) +
           WithThousands(row.unique_test) + "\n";
  }
  out += Pad("Total", 8) + Pad(cell(report.total), 18) +
         WithThousands(report.total.unique_test) + "\n";
  out += "denominator: unique test surfaces per type\n";
  return out;
}

std::string OverlapToJson(const OverlapReport& report) {
  auto encode = [](const OverlapReport::Row& row) {
    nlohmann::ordered_json j;
    j["unique_test"] = row.unique_test;
    j["seen_in_train"] = row.seen_in_train;
    j["percentage"] = row.percentage;
    return j;
  };
  nlohmann::ordered_json doc;
  nlohmann::ordered_json per_type;
  for (EntityType type : kEntityTypes) {
    per_type[std::string(EntityTypeName(type))] =
        encode(report.per_type[TypeIndex(type)]);
  }
  doc["per_type"] = std::move(per_type);
  doc["total"] = encode(report.total);
  doc["denominator"] = "unique-test-surfaces";
  return doc.dump(2) + "\n";
}

std::string FormatMappingTable(const MappingReport& report) {
  std::string out =
      Pad("Type", 8) + RightPad("Before", 10) + RightPad("Added", 10) +
      RightPad("Increase", 12) + "\n";
  auto row = [&](const std::string& name, const MappingReport::Row& r) {
    out += Pad(name, 8) + RightPad(WithThousands(r.mentions_before), 10) +
           RightPad(WithThousands(r.mentions_added), 10) +
           RightPad(FormatPercent(r.percent_increase) + "%", 12) + "\n";
  };
  for (EntityType type : kEntityTypes) {
    row(std::string(EntityTypeName(type)), report.per_type[TypeIndex(type)]);
  }
  row("Total", report.total);
  return out;
}

std::string MappingToJson(const MappingReport& report) {
  auto encode = [](const MappingReport::Row& r) {
    nlohmann::ordered_json j;
    j["mentions_before"] = r.mentions_before;
    j["mentions_added"] = r.mentions_added;
    j["percent_increase"] = r.percent_increase;
    return j;
  };
  nlohmann::ordered_json doc;
  nlohmann::ordered_json per_type;
  for (EntityType type : kEntityTypes) {
    per_type[std::string(EntityTypeName(type))] =
        encode(report.per_type[TypeIndex(type)]);
  }
  doc["per_type"] = std::move(per_type);
  doc["total"] = encode(report.total);
  return doc.dump(2) + "\n";
}

}  // namespace clusteraug

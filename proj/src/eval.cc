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

#include "clusteraug/eval.h"

#include <cstdio>
#include <string>
#include <vector>

#include "clusteraug/error.h"
#include "json.hpp"

namespace clusteraug {

namespace {

double Ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

struct Span {
  std::size_t start;
  std::size_t length;
  EntityType type;
  bool operator==(const Span&) const = default;
};

// Spans in start order; equal label sequences give equal span lists.
std::vector<Span> Spans(std::span<const Label> labels) {
  std::vector<Span> spans;
  std::size_t i = 0;
  while (i < labels.size()) {
    if (labels[i].IsOutside()) {
      ++i;
      continue;
    }
    std::size_t end = i + 1;
    while (end < labels.size() && labels[end].tag == Label::Tag::kInside &&
           labels[end].type == labels[i].type) {
      ++end;
    }
    spans.push_back({i, end - i, labels[i].type});
    i = end;
  }
  return spans;
}

void CheckShapes(const Corpus& gold, const Corpus& pred) {
  if (gold.sentences.size() != pred.sentences.size()) {
    ThrowInvalid("evaluation: gold has " +
                 std::to_string(gold.sentences.size()) +
                 " sentences, prediction has " +
                 std::to_string(pred.sentences.size()));
  }
  for (std::size_t s = 0; s < gold.sentences.size(); ++s) {
    if (gold.sentences[s].size() != pred.sentences[s].size()) {
      ThrowInvalid("evaluation: token count mismatch in sentence " +
                   std::to_string(s));
    }
  }
}

}  // namespace

double PrfCounts::precision() const { return Ratio(tp, tp + fp); }
double PrfCounts::recall() const { return Ratio(tp, tp + fn); }
double PrfCounts::f1() const {
  const double p = precision();
  const double r = recall();
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

EvalReport SentencePrf(std::span<const Label> gold,
                       std::span<const Label> pred) {
  EvalReport report;
  // Both span lists are sorted by start and non-overlapping, so a merge walk
  // finds the exact matches.
  const std::vector<Span> g = Spans(gold);
  const std::vector<Span> p = Spans(pred);
  std::size_t gi = 0;
  std::size_t pi = 0;
  while (gi < g.size() || pi < p.size()) {
    if (pi == p.size() || (gi < g.size() && g[gi].start < p[pi].start)) {
      ++report.per_type[TypeIndex(g[gi++].type)].fn;
    } else if (gi == g.size() || p[pi].start < g[gi].start) {
      ++report.per_type[TypeIndex(p[pi++].type)].fp;
    } else if (g[gi] == p[pi]) {
      ++report.per_type[TypeIndex(g[gi].type)].tp;
      ++gi;
      ++pi;
    } else {
      ++report.per_type[TypeIndex(g[gi++].type)].fn;
      ++report.per_type[TypeIndex(p[pi++].type)].fp;
    }
  }
  for (const PrfCounts& c : report.per_type) report.micro += c;
  return report;
}

EvalReport EntityPrf(const Corpus& gold, const Corpus& pred) {
  CheckShapes(gold, pred);
  const long long n = static_cast<long long>(gold.sentences.size());
  std::vector<EvalReport> parts(gold.sentences.size());
#pragma omp parallel for schedule(static)
  for (long long s = 0; s < n; ++s) {
    const std::size_t i = static_cast<std::size_t>(s);
    parts[i] = SentencePrf(gold.sentences[i].labels, pred.sentences[i].labels);
  }
  EvalReport report;
  for (const EvalReport& part : parts) {
    for (std::size_t t = 0; t < kNumEntityTypes; ++t) {
      report.per_type[t] += part.per_type[t];
    }
    report.micro += part.micro;
  }
  return report;
}

double TokenAccuracy(const Corpus& gold, const Corpus& pred) {
  CheckShapes(gold, pred);
  std::size_t total = 0;
  std::size_t same = 0;
  for (std::size_t s = 0; s < gold.sentences.size(); ++s) {
    const auto& g = gold.sentences[s].labels;
    const auto& p = pred.sentences[s].labels;
    for (std::size_t i = 0; i < g.size(); ++i) {
      ++total;
      if (g[i] == p[i]) ++same;
    }
  }
  // An empty corpus has no disagreements.
  return total == 0 ? 1.0 : Ratio(same, total);
}

std::string FormatEvalTable(const EvalReport& report) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-6s %8s %8s %8s %10s %10s %10s\n",
                "type", "TP", "FP", "FN", "precision", "recall", "F1");
  out += line;
  auto row = [&](const char* name, const PrfCounts& c) {
    std::snprintf(line, sizeof(line),
                  "%-6s %8zu %8zu %8zu %10.4f %10.4f %10.4f\n", name, c.tp,
                  c.fp, c.fn, c.precision(), c.recall(), c.f1());
    out += line;
  };
  for (EntityType type : kEntityTypes) {
    row(std::string(EntityTypeName(type)).c_str(),
        report.per_type[TypeIndex(type)]);
  }
  row("micro", report.micro);
  out += "matching: exact span and type; 0/0 reported as 0\n";
  return out;
}

std::string EvalReportToJson(const EvalReport& report) {
  auto encode = [](const PrfCounts& c) {
    nlohmann::ordered_json j;
    j["tp"] = c.tp;
    j["fp"] = c.fp;
    j["fn"] = c.fn;
    j["precision"] = c.precision();
    j["recall"] = c.recall();
    j["f1"] = c.f1();
    return j;
  };
  nlohmann::ordered_json doc;
  doc["matching"] = "exact-span-and-type";
  doc["zero_division"] = 0;
  nlohmann::ordered_json per_type;
  for (EntityType type : kEntityTypes) {
    per_type[std::string(EntityTypeName(type))] =
        encode(report.per_type[TypeIndex(type)]);
  }
  doc["per_type"] = std::move(per_type);
  doc["micro"] = encode(report.micro);
  return doc.dump(2) + "\n";
}

}  // namespace clusteraug

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

#ifndef CLUSTERAUG_EVAL_H_
#define CLUSTERAUG_EVAL_H_

#include <array>
#include <cstddef>
#include <span>
#include <string>

#include "clusteraug/corpus.h"

namespace clusteraug {

struct PrfCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  // 0/0 is reported as 0 for precision, recall and F1.
  double precision() const;
  double recall() const;
  double f1() const;

  PrfCounts& operator+=(const PrfCounts& other) {
    tp += other.tp;
    fp += other.fp;
    fn += other.fn;
    return *this;
  }
  friend bool operator==(const PrfCounts&, const PrfCounts&) = default;
};

// Entity-level scores: a predicted mention counts only if its sentence,
// start, length and type all match a gold mention.
struct EvalReport {
  std::array<PrfCounts, kNumEntityTypes> per_type;
  PrfCounts micro;
};

// Throws when sentence counts or per-sentence token counts differ.
EvalReport EntityPrf(const Corpus& gold, const Corpus& pred);

// Same matching rule for a single sentence pair (labels only).
EvalReport SentencePrf(std::span<const Label> gold, std::span<const Label> pred);

double TokenAccuracy(const Corpus& gold, const Corpus& pred);

std::string FormatEvalTable(const EvalReport& report);
std::string EvalReportToJson(const EvalReport& report);

}  // namespace clusteraug

#endif  // CLUSTERAUG_EVAL_H_

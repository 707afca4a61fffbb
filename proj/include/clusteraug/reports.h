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

#ifndef CLUSTERAUG_REPORTS_H_
#define CLUSTERAUG_REPORTS_H_

#include <string>

#include "clusteraug/corpus.h"

namespace clusteraug {

// Line-oriented tables and JSON documents for the corpus reports.

// "6,839"
std::string WithThousands(std::size_t value);
// Up to two decimals, at least one: 75 -> "75.0", 48.594 -> "48.59".
std::string FormatPercent(double value);

std::string FormatStatsTable(const CorpusStats& stats);
std::string StatsToJson(const CorpusStats& stats);

// Cells read "seen, percentage%".
std::string FormatOverlapTable(const OverlapReport& report);
std::string OverlapToJson(const OverlapReport& report);

std::string FormatMappingTable(const MappingReport& report);
std::string MappingToJson(const MappingReport& report);

}  // namespace clusteraug

#endif  // CLUSTERAUG_REPORTS_H_

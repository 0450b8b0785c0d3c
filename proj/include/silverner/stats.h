// Copyright 2026 The Silverner Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SILVERNER_STATS_H_
#define SILVERNER_STATS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "silverner/corpus.h"

namespace silverner {

struct LengthStats {
  double mean = 0;
  double std = 0;  // population
  uint64_t min = 0;
  uint64_t max = 0;
  uint64_t q25 = 0;  // nearest rank
  uint64_t q50 = 0;
  uint64_t q75 = 0;

  bool operator==(const LengthStats &) const = default;
};

struct OriginShare {
  uint64_t annotated_tokens = 0;
  uint64_t detected_tokens = 0;
  double annotated = 0;
  double detected = 0;

  bool operator==(const OriginShare &) const = default;
};

// Tag keys are "O", "ORG", "PER" and "LOC"; origin keys add "ALL".
struct CorpusStats {
  uint64_t sentence_count = 0;
  uint64_t token_count = 0;
  std::optional<LengthStats> length;
  std::map<std::string, uint64_t> tag_counts;
  std::map<std::string, double> entity_shares;
  std::map<std::string, OriginShare> origin_shares;
  std::map<uint64_t, uint64_t> length_histogram;

  bool operator==(const CorpusStats &) const = default;
};

// Mergeable partial statistics. A token counts toward class X when its tag
// is B-X or I-X; origin shares count tokens that carry an origin.
class StatsAccumulator {
 public:
  void Add(const TaggedSentence &sentence);
  // Raw token counts with no sentence structure (for tables of totals).
  void AddTokens(std::optional<EntityClass> cls, std::optional<Origin> origin,
                 uint64_t count);
  void Merge(const StatsAccumulator &other);
  CorpusStats Finish() const;

 private:
  uint64_t sentences_ = 0;
  uint64_t outside_ = 0;
  std::map<EntityClass, uint64_t> entity_;
  std::map<EntityClass, uint64_t> annotated_;
  std::map<EntityClass, uint64_t> predicted_;
  std::map<uint64_t, uint64_t> histogram_;
};

CorpusStats ComputeStats(const Corpus &corpus);

// Percentage of all tokens carrying the given tag key.
double TagPercent(const CorpusStats &stats, std::string_view key);

// Two-decimal percentage, truncated as in published corpus tables.
std::string FormatPercent(double percent);

// 1234567 -> "1,234,567".
std::string FormatCount(uint64_t count);

enum class ReportFormat { kJson, kText };

std::string RenderReport(const CorpusStats &stats, ReportFormat format);

// Inverse of the JSON report. Throws std::runtime_error on malformed input.
CorpusStats ParseReport(std::string_view json);

}  // namespace silverner

#endif  // SILVERNER_STATS_H_

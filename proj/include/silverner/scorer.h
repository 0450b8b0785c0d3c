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

#ifndef SILVERNER_SCORER_H_
#define SILVERNER_SCORER_H_

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "silverner/corpus.h"

namespace silverner {

enum class ScoreMode { kStrict, kPartial };

struct ClassScore {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  // Matched credit (TP count in strict mode) and entity totals.
  double credit = 0;
  uint64_t predicted = 0;
  uint64_t gold = 0;
};

struct Score {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  double credit = 0;
  uint64_t predicted = 0;
  uint64_t gold = 0;
  // In partial mode tp counts the predictions that earned any credit.
  uint64_t tp = 0;
  uint64_t fp = 0;
  uint64_t fn = 0;
  std::map<std::string, ClassScore> per_class;
};

class TokenMismatchError : public std::runtime_error {
 public:
  TokenMismatchError(const std::string &what, size_t sentence)
      : std::runtime_error(what), sentence_(sentence) {}
  size_t sentence() const { return sentence_; }

 private:
  size_t sentence_;
};

// 2PR / (P + R), or 0 when P + R is 0.
double F1(double precision, double recall);

// Precision and recall from matched credit. With no predictions precision is
// 1 if there is no gold entity either and 0 otherwise; recall mirrors this.
double Precision(double credit, uint64_t predicted, uint64_t gold);
double Recall(double credit, uint64_t predicted, uint64_t gold);

struct EntitySpan {
  size_t sentence;
  size_t begin;  // token index
  size_t end;
  EntityClass cls;

  bool operator==(const EntitySpan &) const = default;
};

// Entities of a BIO corpus in document order.
std::vector<EntitySpan> ExtractEntities(const Corpus &corpus);

// Entity-level comparison. Strict mode counts exact span-and-class matches.
// Partial mode credits each prediction with overlap / gold length against
// the best unused same-class gold entity. Throws TokenMismatchError when the
// two corpora do not share their token sequence.
Score ScoreCorpora(const Corpus &gold, const Corpus &pred, ScoreMode mode);

std::string ScoreJson(const Score &score, ScoreMode mode);
std::string ScoreText(const Score &score, ScoreMode mode);

}  // namespace silverner

#endif  // SILVERNER_SCORER_H_

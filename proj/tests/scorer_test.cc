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

#include "silverner/scorer.h"

#include <gtest/gtest.h>

#include <random>
#include <set>

namespace silverner {
namespace {

constexpr auto kPer = EntityClass::kPerson;
constexpr auto kLoc = EntityClass::kLocation;

// One sentence of `length` tokens with the given entities [begin, end).
Corpus Make(size_t length,
            const std::vector<std::tuple<size_t, size_t, EntityClass>> &entities) {
  TaggedSentence s;
  for (size_t i = 0; i < length; ++i) {
    s.tokens.push_back({"t" + std::to_string(i), BioTag::Outside(), {}});
  }
  for (const auto &[begin, end, cls] : entities) {
    for (size_t i = begin; i < end; ++i) {
      s.tokens[i].tag = i == begin ? BioTag::Begin(cls) : BioTag::Inside(cls);
    }
  }
  Corpus c;
  c.sentences.push_back(s);
  return c;
}

TEST(ScorerTest, IdentityIsPerfect) {
  const Corpus gold = Make(10, {{0, 2, kPer}, {5, 8, kLoc}});
  for (ScoreMode mode : {ScoreMode::kStrict, ScoreMode::kPartial}) {
    const Score s = ScoreCorpora(gold, gold, mode);
    EXPECT_EQ(s.precision, 1);
    EXPECT_EQ(s.recall, 1);
    EXPECT_EQ(s.f1, 1);
  }
}

TEST(ScorerTest, PaperF1) {
  EXPECT_NEAR(F1(0.7753, 0.5976), 0.6749, 0.0001);
  EXPECT_EQ(F1(0, 0), 0);
}

TEST(ScorerTest, StrictHandCount) {
  const Corpus gold = Make(10, {{0, 2, kPer}, {5, 8, kLoc}});
  const Corpus pred = Make(10, {{0, 2, kPer}, {9, 10, kLoc}});
  const Score s = ScoreCorpora(gold, pred, ScoreMode::kStrict);
  EXPECT_EQ(s.tp, 1u);
  EXPECT_EQ(s.fp, 1u);
  EXPECT_EQ(s.fn, 1u);
  EXPECT_DOUBLE_EQ(s.precision, 0.5);
  EXPECT_DOUBLE_EQ(s.recall, 0.5);
  EXPECT_DOUBLE_EQ(s.f1, 0.5);
  EXPECT_DOUBLE_EQ(s.per_class.at("PER").f1, 1.0);
  EXPECT_DOUBLE_EQ(s.per_class.at("LOC").f1, 0.0);
}

TEST(ScorerTest, WrongClassIsNotAMatch) {
  const Score s = ScoreCorpora(Make(4, {{0, 2, kPer}}), Make(4, {{0, 2, kLoc}}),
                               ScoreMode::kStrict);
  EXPECT_EQ(s.tp, 0u);
}

TEST(ScorerTest, PartialCreditIsOverlapOverGoldLength) {
  const Corpus gold = Make(10, {{2, 6, kLoc}});
  const Corpus pred = Make(10, {{4, 7, kLoc}});
  const Score partial = ScoreCorpora(gold, pred, ScoreMode::kPartial);
  EXPECT_DOUBLE_EQ(partial.credit, 0.5);
  EXPECT_DOUBLE_EQ(partial.precision, 0.5);
  EXPECT_DOUBLE_EQ(partial.recall, 0.5);
  EXPECT_EQ(ScoreCorpora(gold, pred, ScoreMode::kStrict).f1, 0);
}

TEST(ScorerTest, EachGoldEntityCreditedOnce) {
  const Corpus gold = Make(10, {{0, 4, kPer}});
  const Corpus pred = Make(10, {{0, 2, kPer}, {2, 4, kPer}});
  const Score s = ScoreCorpora(gold, pred, ScoreMode::kPartial);
  EXPECT_DOUBLE_EQ(s.credit, 0.5);
  EXPECT_EQ(s.predicted, 2u);
}

TEST(ScorerTest, EmptySets) {
  const Score none = ScoreCorpora(Make(3, {}), Make(3, {}), ScoreMode::kStrict);
  EXPECT_EQ(none.precision, 1);
  EXPECT_EQ(none.recall, 1);
  const Score missed = ScoreCorpora(Make(3, {{0, 1, kPer}}), Make(3, {}),
                                    ScoreMode::kStrict);
  EXPECT_EQ(missed.precision, 0);
  EXPECT_EQ(missed.recall, 0);
  EXPECT_EQ(missed.f1, 0);
}

TEST(ScorerTest, TokenMismatchNamesSentence) {
  Corpus gold = Make(3, {});
  gold.sentences.push_back(gold.sentences[0]);
  Corpus pred = gold;
  pred.sentences[1].tokens[2].text = "other";
  try {
    ScoreCorpora(gold, pred, ScoreMode::kStrict);
    FAIL() << "expected TokenMismatchError";
  } catch (const TokenMismatchError &e) {
    EXPECT_EQ(e.sentence(), 1u);
  }
  pred = gold;
  pred.sentences.pop_back();
  EXPECT_THROW(ScoreCorpora(gold, pred, ScoreMode::kStrict), TokenMismatchError);
}

TEST(ScorerTest, ExtractEntitiesHandlesStrayInside) {
  Corpus c = Make(4, {{0, 2, kPer}});
  c.sentences[0].tokens[3].tag = BioTag::Inside(kLoc);
  const auto entities = ExtractEntities(c);
  ASSERT_EQ(entities.size(), 2u);
  EXPECT_EQ(entities[1], (EntitySpan{0, 3, 4, kLoc}));
}

Corpus RandomCorpus(std::mt19937 &rng, size_t length) {
  std::vector<std::tuple<size_t, size_t, EntityClass>> entities;
  size_t pos = rng() % 3;
  while (pos < length) {
    const size_t len = 1 + rng() % 3;
    if (pos + len > length) break;
    entities.emplace_back(pos, pos + len, kAllClasses[rng() % 3]);
    pos += len + rng() % 3;
  }
  return Make(length, entities);
}

std::set<std::tuple<size_t, size_t, size_t, EntityClass>> EntitySet(const Corpus &c) {
  std::set<std::tuple<size_t, size_t, size_t, EntityClass>> out;
  for (const auto &e : ExtractEntities(c)) out.emplace(e.sentence, e.begin, e.end, e.cls);
  return out;
}

TEST(ScorerTest, StrictAgreesWithSetIntersectionAndProperties) {
  std::mt19937 rng(23);
  for (int round = 0; round < 1000; ++round) {
    const Corpus gold = RandomCorpus(rng, 15);
    const Corpus pred = RandomCorpus(rng, 15);
    const auto g = EntitySet(gold);
    const auto p = EntitySet(pred);
    size_t common = 0;
    for (const auto &e : p) common += g.count(e);
    const Score strict = ScoreCorpora(gold, pred, ScoreMode::kStrict);
    EXPECT_EQ(strict.tp, common);
    EXPECT_EQ(strict.fp, p.size() - common);
    EXPECT_EQ(strict.fn, g.size() - common);

    const Score swapped = ScoreCorpora(pred, gold, ScoreMode::kStrict);
    EXPECT_DOUBLE_EQ(swapped.precision, strict.recall);
    EXPECT_DOUBLE_EQ(swapped.recall, strict.precision);

    const Score partial = ScoreCorpora(gold, pred, ScoreMode::kPartial);
    EXPECT_GE(partial.f1 + 1e-12, strict.f1);
    EXPECT_GE(partial.precision + 1e-12, strict.precision);
    EXPECT_GE(partial.recall + 1e-12, strict.recall);
    for (double v : {strict.precision, strict.recall, strict.f1, partial.precision,
                     partial.recall, partial.f1}) {
      EXPECT_GE(v, 0);
      EXPECT_LE(v, 1);
    }

    // Adding one more correct prediction: copy a missed gold entity into pred
    // when it does not collide with existing predicted tokens.
    for (const auto &e : ExtractEntities(gold)) {
      if (p.count({e.sentence, e.begin, e.end, e.cls})) continue;
      Corpus better = pred;
      auto &tokens = better.sentences[e.sentence].tokens;
      bool free = true;
      for (size_t i = e.begin; i < e.end; ++i) free = free && tokens[i].tag.IsOutside();
      if (e.end < tokens.size() && !tokens[e.end].tag.IsOutside() &&
          tokens[e.end].tag.prefix == BioTag::Prefix::kInside) {
        free = false;
      }
      if (!free) continue;
      for (size_t i = e.begin; i < e.end; ++i) {
        tokens[i].tag = i == e.begin ? BioTag::Begin(e.cls) : BioTag::Inside(e.cls);
      }
      const Score improved = ScoreCorpora(gold, better, ScoreMode::kStrict);
      EXPECT_GE(improved.precision, strict.precision);
      EXPECT_GE(improved.recall, strict.recall);
      EXPECT_GE(improved.f1, strict.f1);
      break;
    }
  }
}

TEST(ScorerTest, ReportsRender) {
  const Score s = ScoreCorpora(Make(4, {{0, 2, kPer}}), Make(4, {{0, 2, kPer}}),
                               ScoreMode::kStrict);
  EXPECT_NE(ScoreJson(s, ScoreMode::kStrict).find("\"f1\": 1.0"), std::string::npos);
  EXPECT_NE(ScoreText(s, ScoreMode::kStrict).find("ALL"), std::string::npos);
}

}  // namespace
}  // namespace silverner

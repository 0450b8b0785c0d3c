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

#include "silverner/mention_tagger.h"

#include <gtest/gtest.h>

#include <random>

#include "oracles.h"

namespace silverner {
namespace {

constexpr auto kPer = EntityClass::kPerson;
constexpr auto kLoc = EntityClass::kLocation;
constexpr auto kOrg = EntityClass::kOrganization;
constexpr auto kAnot = Origin::kAnnotated;
constexpr auto kPred = Origin::kPredicted;

const char kJohn[] = "John Smith travelled to Rio de Janeiro. Visited Copacabana.";

NameIndex Index(const std::map<std::string, EntityClass> &names) {
  NameIndex index;
  for (const auto &[name, cls] : names) index.Add(name, name, cls);
  return index;
}

TEST(MatchMentionsTest, PaperExample) {
  const auto mentions = MatchMentions(
      kJohn, Index({{"John Smith", kPer}, {"Rio de Janeiro", kLoc}}));
  EXPECT_EQ(mentions, (std::vector<Mention>{{Span{0, 10}, kPer, kAnot},
                                            {Span{24, 38}, kLoc, kAnot}}));
}

TEST(MatchMentionsTest, EmptyText) {
  EXPECT_TRUE(MatchMentions("", Index({{"Rio", kLoc}})).empty());
}

TEST(MatchMentionsTest, LongestNameWins) {
  const std::map<std::string, EntityClass> names = {{"Rio", kLoc},
                                                    {"Rio de Janeiro", kLoc}};
  const auto mentions = MatchMentions("Rio de Janeiro", Index(names));
  EXPECT_EQ(mentions, (std::vector<Mention>{{Span{0, 14}, kLoc, kAnot}}));
  EXPECT_EQ(mentions, oracle::LeftmostLongest("Rio de Janeiro", names));
}

TEST(MatchMentionsTest, WordBoundariesRequired) {
  const NameIndex index = Index({{"Rio", kLoc}});
  EXPECT_TRUE(MatchMentions("Riordan", index).empty());
  EXPECT_TRUE(MatchMentions("Arroio", index).empty());
  EXPECT_TRUE(MatchMentions("Rioã", index).empty());
  EXPECT_EQ(MatchMentions("(Rio),", index).size(), 1u);
}

TEST(MatchMentionsTest, SameNameAlwaysSameClass) {
  const auto mentions =
      MatchMentions("Goiás e Goiás e Goiás", Index({{"Goiás", kLoc}}));
  ASSERT_EQ(mentions.size(), 3u);
  for (const auto &m : mentions) EXPECT_EQ(m.cls, kLoc);
}

TEST(MatchMentionsTest, LocalityUnderAppendedText) {
  const std::map<std::string, EntityClass> names = {{"Rio", kLoc},
                                                    {"Rio de Janeiro", kLoc}};
  const NameIndex index = Index(names);
  const auto base = MatchMentions("O Rio de Janeiro e o Rio.", index);
  auto longer = MatchMentions("O Rio de Janeiro e o Rio. Mais Rio.", index);
  ASSERT_GE(longer.size(), base.size());
  longer.resize(base.size());
  EXPECT_EQ(base, longer);
}

TEST(MergeAnnotatedTest, Examples) {
  const std::vector<Mention> exact = {{Span{0, 10}, kPer, kAnot}};
  EXPECT_EQ(MergeAnnotated(exact, {}), exact);
  EXPECT_EQ(MergeAnnotated({{Span{24, 27}, kLoc, kAnot}},
                           {{Span{24, 38}, kLoc, kAnot}}),
            (std::vector<Mention>{{Span{24, 38}, kLoc, kAnot}}));
  EXPECT_EQ(MergeAnnotated({{Span{24, 38}, kLoc, kAnot}},
                           {{Span{0, 10}, kPer, kAnot}}),
            (std::vector<Mention>{{Span{0, 10}, kPer, kAnot},
                                  {Span{24, 38}, kLoc, kAnot}}));
}

TEST(MergePredictedTest, PaperExample) {
  const std::vector<Mention> annotated = {{Span{0, 10}, kPer, kAnot},
                                          {Span{24, 38}, kLoc, kAnot}};
  const auto merged = MergePredicted(annotated, {{Span{48, 58}, kLoc, kPred}});
  ASSERT_EQ(merged.size(), 3u);
  EXPECT_EQ(merged[2], (Mention{Span{48, 58}, kLoc, kPred}));
  EXPECT_EQ(std::string(kJohn).substr(48, 10), "Copacabana");
}

TEST(MergePredictedTest, EmptyPredictedIsIdentity) {
  const std::vector<Mention> annotated = {{Span{0, 10}, kPer, kAnot}};
  EXPECT_EQ(MergePredicted(annotated, {}), annotated);
}

TEST(MergePredictedTest, ConflictingPredictionDropped) {
  EXPECT_EQ(MergePredicted({{Span{24, 38}, kLoc, kAnot}},
                           {{Span{30, 40}, kOrg, kPred}}),
            (std::vector<Mention>{{Span{24, 38}, kLoc, kAnot}}));
}

TEST(MergePredictedTest, RandomSpanSetsAgreeWithOracle) {
  std::mt19937 rng(5);
  auto random_disjoint = [&](Origin origin) {
    std::vector<Mention> out;
    size_t pos = rng() % 5;
    while (pos < 60) {
      const size_t len = 1 + rng() % 6;
      out.push_back({Span{pos, pos + len}, kAllClasses[rng() % 3], origin});
      pos += len + rng() % 8;
    }
    return out;
  };
  for (int round = 0; round < 1000; ++round) {
    const auto annotated = random_disjoint(kAnot);
    const auto predicted = random_disjoint(kPred);
    const auto merged = MergePredicted(annotated, predicted);
    EXPECT_EQ(merged, oracle::MergePredicted(annotated, predicted));
    EXPECT_TRUE(IsDisjointSorted(merged));
    for (const auto &a : annotated) {
      EXPECT_NE(std::find(merged.begin(), merged.end(), a), merged.end());
    }
  }
}

TEST(OriginCodeTest, RoundTrip) {
  EXPECT_EQ(OriginCode(kAnot), "Anot");
  EXPECT_EQ(OriginCode(kPred), "Pred");
  EXPECT_EQ(ParseOriginCode("Pred"), kPred);
  EXPECT_FALSE(ParseOriginCode("pred"));
}

}  // namespace
}  // namespace silverner

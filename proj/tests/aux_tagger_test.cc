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

#include "silverner/aux_tagger.h"

#include <gtest/gtest.h>

#include <chrono>

namespace silverner {
namespace {

const char kJohn[] = "John Smith travelled to Rio de Janeiro. Visited Copacabana.";

std::string WorkerCommand(const std::string &args) {
  return std::string("'") + FAKE_AUX_WORKER + "' " + args;
}

class ScriptedTagger : public AuxTagger {
 public:
  explicit ScriptedTagger(std::optional<std::vector<WireEntity>> reply)
      : reply_(std::move(reply)) {}
  std::optional<std::vector<WireEntity>> Tag(std::string_view) override {
    return reply_;
  }

 private:
  std::optional<std::vector<WireEntity>> reply_;
};

TEST(WireProtocolTest, RequestIsCompactJsonLine) {
  EXPECT_EQ(EncodeRequest(3, "S\xC3\xA3o \"Jo\xC3\xA3o\"\n"),
            "{\"id\":3,\"text\":\"S\xC3\xA3o \\\"Jo\xC3\xA3o\\\"\\n\"}\n");
}

TEST(WireProtocolTest, DecodesResponses) {
  auto ready = DecodeResponse(R"({"ready": true})");
  ASSERT_TRUE(ready);
  EXPECT_TRUE(ready->ready);

  auto reply = DecodeResponse(
      R"({"id": 4, "entities": [{"start": 48, "end": 58, "class": "LOC"}]})");
  ASSERT_TRUE(reply);
  EXPECT_EQ(reply->id, 4);
  EXPECT_EQ(reply->entities, (std::vector<WireEntity>{{48, 58, "LOC"}}));

  auto error = DecodeResponse(R"({"id": null, "error": "bad request"})");
  ASSERT_TRUE(error);
  EXPECT_FALSE(error->id);
  EXPECT_EQ(error->error, "bad request");

  EXPECT_FALSE(DecodeResponse("not json"));
  EXPECT_FALSE(DecodeResponse(R"({"id": 1, "entities": [{"start": "x"}]})"));
}

TEST(RunAuxTaggerTest, ConvertsPrediction) {
  ScriptedTagger tagger(std::vector<WireEntity>{{48, 58, "LOC"}});
  EXPECT_EQ(RunAuxTagger(kJohn, tagger),
            (std::vector<Mention>{
                {Span{48, 58}, EntityClass::kLocation, Origin::kPredicted}}));
}

TEST(RunAuxTaggerTest, EmptyReply) {
  ScriptedTagger tagger(std::vector<WireEntity>{});
  EXPECT_TRUE(RunAuxTagger(kJohn, tagger).empty());
}

TEST(RunAuxTaggerTest, OutOfBoundsAndUnknownClassDropped) {
  ScriptedTagger tagger(std::vector<WireEntity>{
      {100, 110, "LOC"}, {0, 4, "MISC"}, {5, 5, "PER"}, {0, 4, "PER"}});
  AuxCounters counters;
  const auto mentions = RunAuxTagger(kJohn, tagger, &counters);
  EXPECT_EQ(mentions, (std::vector<Mention>{
                          {Span{0, 4}, EntityClass::kPerson, Origin::kPredicted}}));
  EXPECT_EQ(counters.dropped_invalid, 3u);
}

TEST(RunAuxTaggerTest, ScalarOffsetsBecomeByteSpans) {
  // "Em São João." : scalars [3, 11) cover "São João" = bytes [3, 13).
  ScriptedTagger tagger(std::vector<WireEntity>{{3, 11, "LOC"}});
  const std::string text = "Em S\xC3\xA3o Jo\xC3\xA3o.";
  const auto mentions = RunAuxTagger(text, tagger);
  ASSERT_EQ(mentions.size(), 1u);
  EXPECT_EQ(mentions[0].span, (Span{3, 13}));
}

TEST(RunAuxTaggerTest, EdgeWhitespaceTrimmed) {
  ScriptedTagger tagger(std::vector<WireEntity>{{47, 59, "LOC"}, {38, 40, "PER"}});
  AuxCounters counters;
  const auto mentions = RunAuxTagger(kJohn, tagger, &counters);
  ASSERT_EQ(mentions.size(), 2u);
  EXPECT_EQ(mentions[0].span, (Span{38, 39}));
  EXPECT_EQ(mentions[1].span, (Span{48, 59}));
}

TEST(RunAuxTaggerTest, FailureYieldsNoMentions) {
  ScriptedTagger tagger(std::nullopt);
  AuxCounters counters;
  EXPECT_TRUE(RunAuxTagger(kJohn, tagger, &counters).empty());
  EXPECT_EQ(counters.failures, 1u);
}

TEST(SubprocessAuxTaggerTest, TagsCopacabana) {
  RestartBudget budget(3);
  SubprocessAuxTagger tagger(WorkerCommand("--entry Copacabana=LOC"), &budget);
  const auto entities = tagger.Tag(kJohn);
  ASSERT_TRUE(entities);
  EXPECT_EQ(*entities, (std::vector<WireEntity>{{48, 58, "LOC"}}));
  EXPECT_TRUE(tagger.alive());
}

TEST(SubprocessAuxTaggerTest, NonAsciiOffsetsAreScalars) {
  RestartBudget budget(3);
  SubprocessAuxTagger tagger(WorkerCommand("--entry 'S\xC3\xA3o Jo\xC3\xA3o=LOC'"),
                             &budget);
  const std::string text = "Em S\xC3\xA3o Jo\xC3\xA3o.";
  const auto entities = tagger.Tag(text);
  ASSERT_TRUE(entities);
  EXPECT_EQ(*entities, (std::vector<WireEntity>{{3, 11, "LOC"}}));
  const auto mentions = RunAuxTagger(text, tagger);
  ASSERT_EQ(mentions.size(), 1u);
  EXPECT_EQ(text.substr(mentions[0].span.begin, mentions[0].span.size()),
            "S\xC3\xA3o Jo\xC3\xA3o");
}

TEST(SubprocessAuxTaggerTest, ManyRequestsOnOneProcess) {
  RestartBudget budget(0);
  SubprocessAuxTagger tagger(WorkerCommand("--entry Rio=LOC"), &budget);
  for (int i = 0; i < 200; ++i) {
    const std::string text = std::string(static_cast<size_t>(i % 7), 'x') + " Rio";
    const auto entities = tagger.Tag(text);
    ASSERT_TRUE(entities) << i;
    ASSERT_EQ(entities->size(), 1u);
    EXPECT_EQ((*entities)[0].start, i % 7 + 1);
  }
  EXPECT_EQ(tagger.incidents(), 0u);
}

TEST(SubprocessAuxTaggerTest, IgnoresStrayLinesAndForeignIds) {
  RestartBudget budget(0);
  SubprocessAuxTagger tagger(WorkerCommand("--entry Rio=LOC --mode noise"), &budget);
  for (int i = 0; i < 5; ++i) {
    const auto entities = tagger.Tag("no Rio");
    ASSERT_TRUE(entities);
    EXPECT_EQ(*entities, (std::vector<WireEntity>{{3, 6, "LOC"}}));
  }
}

TEST(SubprocessAuxTaggerTest, CrashRestartsWithinBudget) {
  RestartBudget budget(1);
  SubprocessAuxTagger tagger(WorkerCommand("--entry Rio=LOC --mode crash-after:2"),
                             &budget);
  EXPECT_TRUE(tagger.Tag("Rio"));
  EXPECT_TRUE(tagger.Tag("Rio"));
  EXPECT_FALSE(tagger.Tag("Rio"));  // child exits
  EXPECT_EQ(tagger.incidents(), 1u);
  EXPECT_TRUE(tagger.Tag("Rio"));  // restarted
  EXPECT_EQ(tagger.restarts(), 1u);
  EXPECT_TRUE(tagger.Tag("Rio"));
  EXPECT_FALSE(tagger.Tag("Rio"));  // crashes again
  EXPECT_FALSE(tagger.Tag("Rio"));  // budget spent
  EXPECT_EQ(budget.remaining(), 0);
  EXPECT_EQ(tagger.restarts(), 1u);
}

TEST(SubprocessAuxTaggerTest, StalledWorkerTimesOut) {
  RestartBudget budget(0);
  SubprocessAuxTagger tagger(WorkerCommand("--mode hang-after:0"), &budget,
                             std::chrono::milliseconds(300));
  const auto start = std::chrono::steady_clock::now();
  EXPECT_FALSE(tagger.Tag("Rio"));
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(5));
  EXPECT_EQ(tagger.incidents(), 1u);
  EXPECT_FALSE(tagger.alive());
}

TEST(SubprocessAuxTaggerTest, ErrorResponseIsAFailureNotAnIncident) {
  RestartBudget budget(0);
  SubprocessAuxTagger tagger(WorkerCommand("--mode error"), &budget);
  AuxCounters counters;
  EXPECT_TRUE(RunAuxTagger("Rio", tagger, &counters).empty());
  EXPECT_EQ(counters.failures, 1u);
  EXPECT_EQ(tagger.incidents(), 0u);
  EXPECT_TRUE(tagger.alive());
}

TEST(SubprocessAuxTaggerTest, MissingReadyLineFails) {
  RestartBudget budget(0);
  SubprocessAuxTagger tagger(WorkerCommand("--mode no-ready"), &budget,
                             std::chrono::milliseconds(2000));
  EXPECT_FALSE(tagger.Tag("Rio"));
  EXPECT_EQ(tagger.incidents(), 1u);
}

TEST(SubprocessAuxTaggerTest, InvalidSpansFromWorkerAreDropped) {
  RestartBudget budget(0);
  SubprocessAuxTagger tagger(WorkerCommand("--entry Rio=LOC --mode bad-spans"),
                             &budget);
  AuxCounters counters;
  const auto mentions = RunAuxTagger("no Rio", tagger, &counters);
  ASSERT_EQ(mentions.size(), 1u);
  EXPECT_EQ(mentions[0].span, (Span{3, 6}));
  EXPECT_EQ(counters.dropped_invalid, 3u);
}

TEST(SubprocessAuxTaggerTest, MissingCommandFails) {
  RestartBudget budget(0);
  SubprocessAuxTagger tagger("/nonexistent/aux-worker", &budget,
                             std::chrono::milliseconds(2000));
  EXPECT_FALSE(tagger.Tag("Rio"));
}

}  // namespace
}  // namespace silverner

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

#ifndef SILVERNER_AUX_TAGGER_H_
#define SILVERNER_AUX_TAGGER_H_

#include <sys/types.h>

#include <atomic>
#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "silverner/mention_tagger.h"

namespace silverner {

// One entity as it travels over the wire: offsets count Unicode scalar
// values of the request text.
struct WireEntity {
  int64_t start = 0;
  int64_t end = 0;
  std::string cls;

  bool operator==(const WireEntity &) const = default;
};

struct WireResponse {
  bool ready = false;
  std::optional<int64_t> id;
  std::vector<WireEntity> entities;
  std::optional<std::string> error;
};

// {"id":<id>,"text":<text>} followed by '\n'.
std::string EncodeRequest(int64_t id, std::string_view text);

// Parses one response line. Returns nullopt when the line is not a valid
// response object.
std::optional<WireResponse> DecodeResponse(std::string_view line);

// Source of predicted entities for a text. Implementations return nullopt
// when the tagger failed for this text.
class AuxTagger {
 public:
  virtual ~AuxTagger() = default;
  virtual std::optional<std::vector<WireEntity>> Tag(std::string_view text) = 0;
};

// Restart allowance shared by every worker process of one run.
class RestartBudget {
 public:
  explicit RestartBudget(int restarts) : remaining_(restarts) {}
  bool TryConsume() {
    int current = remaining_.load();
    while (current > 0) {
      if (remaining_.compare_exchange_weak(current, current - 1)) return true;
    }
    return false;
  }
  int remaining() const { return remaining_.load(); }

 private:
  std::atomic<int> remaining_;
};

// Talks the JSON Lines protocol with a child process started through
// /bin/sh -c. The child must print {"ready": true} before serving requests.
// A crashed or stalled child is killed; the next request restarts it while
// the shared budget lasts, otherwise the tagger stays failed.
class SubprocessAuxTagger : public AuxTagger {
 public:
  SubprocessAuxTagger(std::string command, RestartBudget *budget,
                      std::chrono::milliseconds timeout =
                          std::chrono::seconds(30));
  ~SubprocessAuxTagger() override;

  SubprocessAuxTagger(const SubprocessAuxTagger &) = delete;
  SubprocessAuxTagger &operator=(const SubprocessAuxTagger &) = delete;

  std::optional<std::vector<WireEntity>> Tag(std::string_view text) override;

  size_t incidents() const { return incidents_; }
  size_t restarts() const { return restarts_; }
  bool alive() const { return pid_ > 0; }

 private:
  bool Start();
  void Stop();
  bool WriteAll(std::string_view data);
  // Reads one line, waiting at most until the deadline.
  std::optional<std::string> ReadLine(
      std::chrono::steady_clock::time_point deadline);

  std::string command_;
  RestartBudget *budget_;
  std::chrono::milliseconds timeout_;
  pid_t pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  bool started_once_ = false;
  std::string buffer_;
  int64_t next_id_ = 1;
  std::map<int64_t, WireResponse> early_;
  size_t incidents_ = 0;
  size_t restarts_ = 0;
};

struct AuxCounters {
  size_t requests = 0;
  size_t failures = 0;
  size_t dropped_invalid = 0;
};

// Tags `text` with the auxiliary tagger and converts the result to Predicted
// mentions in byte offsets. Entities out of bounds, empty, with an unknown
// class or overlapping an earlier entity are dropped and counted. Edge
// whitespace is trimmed. A failed tagger yields no mentions.
std::vector<Mention> RunAuxTagger(std::string_view text, AuxTagger &tagger,
                                  AuxCounters *counters = nullptr);

}  // namespace silverner

#endif  // SILVERNER_AUX_TAGGER_H_

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

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <mutex>

#include "json.hpp"
#include "silverner/text_util.h"

namespace silverner {

std::string EncodeRequest(int64_t id, std::string_view text) {
  nlohmann::ordered_json request;
  request["id"] = id;
  request["text"] = std::string(text);
  return request.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) +
         "\n";
}

std::optional<WireResponse> DecodeResponse(std::string_view line) {
  const auto json = nlohmann::json::parse(line, nullptr, false);
  if (json.is_discarded() || !json.is_object()) return std::nullopt;
  WireResponse response;
  if (auto ready = json.find("ready"); ready != json.end()) {
    if (!ready->is_boolean()) return std::nullopt;
    response.ready = ready->get<bool>();
    return response;
  }
  auto id = json.find("id");
  if (id == json.end()) return std::nullopt;
  if (id->is_number_integer()) {
    response.id = id->get<int64_t>();
  } else if (!id->is_null()) {
    return std::nullopt;
  }
  if (auto error = json.find("error"); error != json.end()) {
    response.error = error->is_string() ? error->get<std::string>()
                                        : error->dump();
    return response;
  }
  auto entities = json.find("entities");
  if (entities == json.end() || !entities->is_array()) return std::nullopt;
  for (const auto &entity : *entities) {
    if (!entity.is_object()) return std::nullopt;
    auto start = entity.find("start");
    auto end = entity.find("end");
    auto cls = entity.find("class");
    if (start == entity.end() || end == entity.end() || cls == entity.end() ||
        !start->is_number_integer() || !end->is_number_integer() ||
        !cls->is_string()) {
      return std::nullopt;
    }
    response.entities.push_back(
        {start->get<int64_t>(), end->get<int64_t>(), cls->get<std::string>()});
  }
  return response;
}

namespace {

void IgnoreSigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { signal(SIGPIPE, SIG_IGN); });
}

}  // namespace

SubprocessAuxTagger::SubprocessAuxTagger(std::string command,
                                         RestartBudget *budget,
                                         std::chrono::milliseconds timeout)
    : command_(std::move(command)), budget_(budget), timeout_(timeout) {
  IgnoreSigpipe();
}

SubprocessAuxTagger::~SubprocessAuxTagger() { Stop(); }

bool SubprocessAuxTagger::Start() {
  int in_pipe[2], out_pipe[2];
  if (pipe2(in_pipe, O_CLOEXEC) != 0) return false;
  if (pipe2(out_pipe, O_CLOEXEC) != 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    return false;
  }
  const pid_t pid = fork();
  if (pid < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) close(fd);
    return false;
  }
  if (pid == 0) {
    // Own process group, so Stop() also reaches whatever the shell spawned.
    setpgid(0, 0);
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char *>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);
  close(in_pipe[0]);
  close(out_pipe[1]);
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  buffer_.clear();
  early_.clear();
  started_once_ = true;

  const auto deadline = std::chrono::steady_clock::now() + timeout_;
  while (true) {
    auto line = ReadLine(deadline);
    if (!line) break;
    auto response = DecodeResponse(*line);
    if (response && response->ready) return true;
  }
  Stop();
  return false;
}

void SubprocessAuxTagger::Stop() {
  if (to_child_ >= 0) close(to_child_);
  if (from_child_ >= 0) close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    kill(-pid_, SIGKILL);
    kill(pid_, SIGKILL);
    int status;
    while (waitpid(pid_, &status, 0) < 0 && errno == EINTR) {
    }
  }
  pid_ = -1;
}

bool SubprocessAuxTagger::WriteAll(std::string_view data) {
  while (!data.empty()) {
    const ssize_t written = write(to_child_, data.data(), data.size());
    if (written < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    data.remove_prefix(static_cast<size_t>(written));
  }
  return true;
}

std::optional<std::string> SubprocessAuxTagger::ReadLine(
    std::chrono::steady_clock::time_point deadline) {
  char chunk[65536];
  while (true) {
    const size_t newline = buffer_.find('\n');
    if (newline != std::string::npos) {
      std::string line = buffer_.substr(0, newline);
      buffer_.erase(0, newline + 1);
      return line;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) return std::nullopt;
    pollfd fd{from_child_, POLLIN, 0};
    const int ready = poll(&fd, 1, static_cast<int>(left.count()));
    if (ready < 0 && errno == EINTR) continue;
    if (ready <= 0) return std::nullopt;
    const ssize_t got = read(from_child_, chunk, sizeof(chunk));
    if (got < 0 && errno == EINTR) continue;
    if (got <= 0) return std::nullopt;
    buffer_.append(chunk, static_cast<size_t>(got));
  }
}

std::optional<std::vector<WireEntity>> SubprocessAuxTagger::Tag(
    std::string_view text) {
  if (pid_ <= 0) {
    if (started_once_) {
      if (!budget_ || !budget_->TryConsume()) return std::nullopt;
      ++restarts_;
    }
    if (!Start()) {
      ++incidents_;
      return std::nullopt;
    }
  }
  const int64_t id = next_id_++;
  if (!WriteAll(EncodeRequest(id, text))) {
    ++incidents_;
    Stop();
    return std::nullopt;
  }
  if (auto it = early_.find(id); it != early_.end()) {
    WireResponse response = std::move(it->second);
    early_.erase(it);
    if (response.error) return std::nullopt;
    return std::move(response.entities);
  }
  const auto deadline = std::chrono::steady_clock::now() + timeout_;
  while (true) {
    auto line = ReadLine(deadline);
    if (!line) {
      ++incidents_;
      Stop();
      return std::nullopt;
    }
    auto response = DecodeResponse(*line);
    if (!response || response->ready) continue;
    if (!response->id) {
      // Uncorrelated error line: with one request in flight it is ours.
      if (response->error) return std::nullopt;
      continue;
    }
    if (*response->id == id) {
      if (response->error) return std::nullopt;
      return std::move(response->entities);
    }
    if (*response->id > id) early_.emplace(*response->id, std::move(*response));
  }
}

std::vector<Mention> RunAuxTagger(std::string_view text, AuxTagger &tagger,
                                  AuxCounters *counters) {
  AuxCounters local;
  AuxCounters &count = counters ? *counters : local;
  ++count.requests;
  auto entities = tagger.Tag(text);
  if (!entities) {
    ++count.failures;
    return {};
  }
  const std::vector<size_t> offsets = ScalarByteOffsets(text);
  const auto scalars = static_cast<int64_t>(offsets.size() - 1);
  std::vector<Mention> mentions;
  for (const auto &entity : *entities) {
    const auto cls = ParseClassCode(entity.cls);
    if (!cls || entity.start < 0 || entity.end > scalars ||
        entity.start >= entity.end) {
      ++count.dropped_invalid;
      continue;
    }
    Span span{offsets[entity.start], offsets[entity.end]};
    size_t length = 0;
    while (span.begin < span.end &&
           IsSpace(DecodeUtf8At(text, span.begin, &length))) {
      span.begin += length;
    }
    while (span.begin < span.end &&
           IsSpace(DecodeUtf8Before(text, span.end))) {
      do {
        --span.end;
      } while (span.end > span.begin &&
               (static_cast<unsigned char>(text[span.end]) & 0xC0) == 0x80);
    }
    if (span.empty()) {
      ++count.dropped_invalid;
      continue;
    }
    mentions.push_back({span, *cls, Origin::kPredicted});
  }
  std::sort(mentions.begin(), mentions.end());
  std::vector<Mention> disjoint;
  for (const auto &mention : mentions) {
    if (!disjoint.empty() && disjoint.back().span.end > mention.span.begin) {
      ++count.dropped_invalid;
      continue;
    }
    disjoint.push_back(mention);
  }
  return disjoint;
}

}  // namespace silverner

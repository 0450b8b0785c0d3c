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

// Dictionary tagger speaking the aux-tagger stdio protocol, for tests.
//
//   fake_aux_worker [--entry Name=CLS]... [--dict file.tsv] [--mode MODE]
//
// Modes: normal, crash-after:N (exit before answering request N+1),
// hang-after:N (stop answering), noise (stray lines before each answer),
// bad-spans (append invalid entities), no-ready (exit at once),
// error (answer every request with an error object).

#include <cctype>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"

namespace {

using nlohmann::json;

// Scalar index of every byte offset that starts a code point.
size_t ScalarAt(const std::string &text, size_t byte) {
  size_t scalars = 0;
  for (size_t i = 0; i < byte && i < text.size(); ++i) {
    if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) ++scalars;
  }
  return scalars;
}

bool IsAsciiWordByte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || std::isalnum(u);
}

json Tag(const std::string &text,
         const std::vector<std::pair<std::string, std::string>> &dict) {
  json entities = json::array();
  size_t pos = 0;
  while (pos < text.size()) {
    size_t best = 0;
    const std::string *cls = nullptr;
    const bool left_ok = pos == 0 || !IsAsciiWordByte(text[pos - 1]);
    if (left_ok) {
      for (const auto &[name, c] : dict) {
        if (name.size() <= best || text.compare(pos, name.size(), name) != 0) {
          continue;
        }
        const size_t end = pos + name.size();
        if (end < text.size() && IsAsciiWordByte(text[end])) continue;
        best = name.size();
        cls = &c;
      }
    }
    if (cls) {
      entities.push_back({{"start", ScalarAt(text, pos)},
                          {"end", ScalarAt(text, pos + best)},
                          {"class", *cls}});
      pos += best;
    } else {
      ++pos;
    }
  }
  return entities;
}

void Emit(const json &j) { std::cout << j.dump() << "\n" << std::flush; }

}  // namespace

int main(int argc, char **argv) {
  std::vector<std::pair<std::string, std::string>> dict;
  std::string mode = "normal";
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    const std::string value = argv[i + 1];
    if (flag == "--entry") {
      const size_t eq = value.rfind('=');
      if (eq == std::string::npos) return 2;
      dict.emplace_back(value.substr(0, eq), value.substr(eq + 1));
    } else if (flag == "--dict") {
      std::ifstream in(value);
      std::string line;
      while (std::getline(in, line)) {
        const size_t tab = line.find('\t');
        if (line.empty() || line[0] == '#' || tab == std::string::npos) continue;
        dict.emplace_back(line.substr(0, tab), line.substr(tab + 1));
      }
    } else if (flag == "--mode") {
      mode = value;
    } else {
      return 2;
    }
  }
  if (mode == "no-ready") return 0;

  long limit = -1;
  if (const size_t colon = mode.find(':'); colon != std::string::npos) {
    limit = std::strtol(mode.c_str() + colon + 1, nullptr, 10);
    mode = mode.substr(0, colon);
  }

  Emit({{"ready", true}});
  std::string line;
  long served = 0;
  while (std::getline(std::cin, line)) {
    if (limit >= 0 && served >= limit) {
      if (mode == "crash-after") return 3;
      if (mode == "hang-after") {
        std::this_thread::sleep_for(std::chrono::hours(1));
      }
    }
    ++served;
    const json request = json::parse(line, nullptr, false);
    if (request.is_discarded() || !request.contains("id") ||
        !request.contains("text") || !request["text"].is_string()) {
      Emit({{"id", nullptr}, {"error", "malformed request"}});
      continue;
    }
    const auto id = request["id"];
    if (mode == "error") {
      Emit({{"id", id}, {"error", "backend failure"}});
      continue;
    }
    json entities = Tag(request["text"].get<std::string>(), dict);
    if (mode == "noise") {
      std::cout << "not json\n";
      Emit({{"id", id.get<long>() + 1000}, {"entities", json::array()}});
    }
    if (mode == "bad-spans") {
      entities.push_back({{"start", 0}, {"end", 100000}, {"class", "LOC"}});
      entities.push_back({{"start", 0}, {"end", 1}, {"class", "MISC"}});
      entities.push_back({{"start", 3}, {"end", 2}, {"class", "PER"}});
    }
    Emit({{"id", id}, {"entities", entities}});
  }
  return 0;
}

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

#ifndef SILVERNER_WIKI_INGEST_H_
#define SILVERNER_WIKI_INGEST_H_

#include <cstdint>
#include <deque>
#include <filesystem>
#include <fstream>
#include <istream>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "silverner/span.h"

namespace silverner {

struct Article {
  int64_t article_id = 0;
  std::string title;
  std::string wikitext;
};

struct Interlink {
  std::string target_title;
  std::string anchor_text;
  // Location of anchor_text inside the source wikitext.
  Span span;
};

class DumpError : public std::runtime_error {
 public:
  DumpError(const std::string &what, uint64_t byte_offset)
      : std::runtime_error(what + " at byte " + std::to_string(byte_offset)),
        byte_offset_(byte_offset) {}
  uint64_t byte_offset() const { return byte_offset_; }

 private:
  uint64_t byte_offset_;
};

struct DumpCounters {
  size_t pages = 0;
  size_t articles = 0;
  size_t redirects_skipped = 0;
  size_t namespace_skipped = 0;
};

// Pull reader over a MediaWiki pages-articles export. Yields namespace-0,
// non-redirect pages in file order, holding at most one input chunk of
// decoded pages in memory. Gzip input is detected from the magic bytes.
class DumpReader {
 public:
  explicit DumpReader(std::istream &in);
  explicit DumpReader(const std::filesystem::path &path);
  ~DumpReader();

  DumpReader(const DumpReader &) = delete;
  DumpReader &operator=(const DumpReader &) = delete;

  // Returns false at end of dump. Throws DumpError on malformed XML.
  bool Next(Article *article);

  const DumpCounters &counters() const { return counters_; }

  // Raw (possibly compressed) bytes consumed so far and their CRC-32.
  uint64_t raw_bytes() const;
  uint32_t raw_crc32() const;

 private:
  class Impl;
  friend class Impl;

  std::unique_ptr<std::ifstream> owned_;
  std::unique_ptr<Impl> impl_;
  std::deque<Article> ready_;
  DumpCounters counters_;
};

// Finds [[target]] and [[target|anchor]] links outside <nowiki> and comment
// regions. Unterminated links are skipped and counted in *malformed.
std::vector<Interlink> ExtractInterlinks(std::string_view wikitext,
                                         size_t *malformed = nullptr);

// Resolves a link target to page-title form: drops the "#section" suffix and
// normalizes like a title. Returns an empty string for targets outside the
// article namespace (files, categories, interwiki prefixes).
std::string LinkTargetTitle(std::string_view raw_target);

// True when the target names a file or media page ("File:", "Imagem:", ...).
bool IsFileTarget(std::string_view raw_target);

}  // namespace silverner

#endif  // SILVERNER_WIKI_INGEST_H_

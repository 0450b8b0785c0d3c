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

#ifndef SILVERNER_CORPUS_H_
#define SILVERNER_CORPUS_H_

#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "silverner/tokenizer.h"

namespace silverner {

struct Provenance {
  std::string dump;
  uint64_t dump_bytes = 0;
  uint32_t dump_crc32 = 0;
  std::string catalog;
  uint64_t catalog_bytes = 0;
  uint32_t catalog_crc32 = 0;
  std::string tool_version;
};

struct Corpus {
  std::vector<TaggedSentence> sentences;
  Provenance provenance;
};

class CorpusFormatError : public std::runtime_error {
 public:
  CorpusFormatError(const std::string &what, size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  size_t line() const { return line_; }

 private:
  size_t line_;
};

// Keeps the sentences with at least one Annotated token.
std::vector<TaggedSentence> FilterAnnotated(std::vector<TaggedSentence> sentences);
bool HasAnnotatedToken(const TaggedSentence &sentence);

// One "token<TAB>tag" line per token ("token<TAB>tag<TAB>origin" with
// with_origin; O tokens carry "-" as origin), a blank line after each
// sentence. Returns the number of bytes written. Throws std::runtime_error
// when the sink fails and std::invalid_argument for an empty token or one
// containing whitespace.
uint64_t WriteCorpus(const Corpus &corpus, std::ostream &out, bool with_origin);
uint64_t WriteSentence(const TaggedSentence &sentence, std::ostream &out,
                       bool with_origin);

// Inverse of WriteCorpus. Validates tags and BIO order; throws
// CorpusFormatError with the offending line number.
Corpus ReadCorpus(std::istream &in);

std::string ProvenanceJson(const Provenance &provenance);

// Sentences [begin, end) as an aligned token/tag listing for humans.
std::string InspectCorpus(const Corpus &corpus, size_t begin, size_t end);

}  // namespace silverner

#endif  // SILVERNER_CORPUS_H_

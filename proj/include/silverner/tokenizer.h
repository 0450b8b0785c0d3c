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

#ifndef SILVERNER_TOKENIZER_H_
#define SILVERNER_TOKENIZER_H_

#include <filesystem>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "silverner/entity_catalog.h"
#include "silverner/mention_tagger.h"
#include "silverner/span.h"

namespace silverner {

struct TokenSpan {
  Span span;
  std::string text;

  bool operator==(const TokenSpan &) const = default;
};

struct SentenceSpan {
  Span span;
  std::vector<TokenSpan> tokens;

  bool operator==(const SentenceSpan &) const = default;
};

struct BioTag {
  enum class Prefix : uint8_t { kOutside, kBegin, kInside };

  Prefix prefix = Prefix::kOutside;
  EntityClass cls = EntityClass::kPerson;  // meaningless for kOutside

  static BioTag Outside() { return {}; }
  static BioTag Begin(EntityClass c) { return {Prefix::kBegin, c}; }
  static BioTag Inside(EntityClass c) { return {Prefix::kInside, c}; }

  bool IsOutside() const { return prefix == Prefix::kOutside; }
  std::string ToString() const;
  static std::optional<BioTag> Parse(std::string_view text);

  bool operator==(const BioTag &other) const {
    return prefix == other.prefix &&
           (prefix == Prefix::kOutside || cls == other.cls);
  }
};

struct TaggedToken {
  std::string text;
  BioTag tag;
  // Set for entity tokens produced by the pipeline; absent for O tokens and
  // for corpora read without an origin column.
  std::optional<Origin> origin;

  bool operator==(const TaggedToken &) const = default;
};

struct TaggedSentence {
  std::vector<TaggedToken> tokens;

  bool operator==(const TaggedSentence &) const = default;
};

// Every I-X follows a B-X or I-X, and origins appear only on entity tokens.
bool IsWellFormed(const TaggedSentence &sentence);

// Abbreviations are stored without their trailing period and compared
// case-insensitively.
class AbbreviationList {
 public:
  AbbreviationList() = default;
  static AbbreviationList Default();
  static AbbreviationList Load(std::istream &in);
  static AbbreviationList LoadFile(const std::filesystem::path &path);

  void Add(std::string_view abbreviation);
  bool Contains(std::string_view word) const;
  size_t size() const { return entries_.size(); }

 private:
  std::unordered_set<std::string> entries_;
};

std::string_view DefaultAbbreviationText();

// Sentence and word segmentation. Implementations must cover every
// non-whitespace character exactly once and return ordered, disjoint spans.
class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  // Sentence spans only; tokens are left empty.
  virtual std::vector<SentenceSpan> SplitSentences(std::string_view text) const = 0;
  // Fills sentence.tokens from text[sentence.span].
  virtual SentenceSpan SplitWords(SentenceSpan sentence,
                                  std::string_view text) const = 0;
};

// Rule-based tokenizer. Sentences end at '.', '!', '?' or '…' (plus closing
// quotes and brackets) followed by whitespace and an upper-case letter or
// digit, except after a known abbreviation or a single-letter initial.
// Paragraph breaks (blank lines) always end a sentence. Words split on
// whitespace, with leading and trailing punctuation peeled off.
class RuleTokenizer : public Tokenizer {
 public:
  RuleTokenizer() : abbreviations_(AbbreviationList::Default()) {}
  explicit RuleTokenizer(AbbreviationList abbreviations)
      : abbreviations_(std::move(abbreviations)) {}

  std::vector<SentenceSpan> SplitSentences(std::string_view text) const override;
  SentenceSpan SplitWords(SentenceSpan sentence,
                          std::string_view text) const override;

 private:
  bool KeepsPeriod(std::string_view word) const;

  AbbreviationList abbreviations_;
};

// Merges consecutive sentences that share a mention, repeatedly, until every
// mention lies inside a single sentence. Tokens are concatenated.
std::vector<SentenceSpan> RepairCrossSentence(std::vector<SentenceSpan> sentences,
                                              const std::vector<Mention> &mentions);

// Splits tokens that straddle a mention boundary. The pieces inside a mention
// that came from split tokens join their contiguous neighbours inside the
// same mention; outside pieces stay ordinary tokens.
std::vector<TokenSpan> RepairSubword(const std::vector<TokenSpan> &tokens,
                                     const std::vector<Mention> &mentions);

class AlignmentError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Tags the tokens of one sentence. Every mention that intersects the sentence
// must start and end on token boundaries inside it; AlignmentError otherwise.
TaggedSentence ProjectBio(const SentenceSpan &sentence,
                          const std::vector<Mention> &mentions);

}  // namespace silverner

#endif  // SILVERNER_TOKENIZER_H_

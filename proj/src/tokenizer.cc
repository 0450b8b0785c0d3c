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

#include "silverner/tokenizer.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "silverner/text_util.h"

namespace silverner {

namespace {

constexpr std::string_view kDefaultAbbreviations = R"(# Portuguese titles and forms of address
Sr
Sra
Srta
Dr
Dra
Drs
Prof
Profa
Profª
Eng
Arq
Exmo
Exma
Ilmo
Ilma
Revmo
Sto
Sta
Fr
Pe
Gen
Gal
Cel
Ten
Cap
Cmte
Sgt
Maj
Alm
Mons
Pres
Gov
Dep
Sen
Min
# Places and addresses
Av
Rod
Pça
Est
Jd
Apto
# Reference forms
vol
vols
cap
caps
p
pp
pág
págs
fl
fls
nº
ed
eds
org
coord
trad
cf
cit
ibid
fig
figs
tab
séc
sécs
obs
aprox
etc
vs
# Organizations and dates
Cia
Ltda
Inc
Ltd
Co
Corp
S.A
S/A
a.C
d.C
jan
fev
abr
mai
jun
jul
ago
nov
dez
# English forms
Mr
Mrs
Ms
St
Jr
Mt
)";

bool IsOpeningPunct(char32_t cp) {
  switch (cp) {
    case '(': case '[': case '{': case '"': case '\'':
    case U'«': case U'“': case U'‘': case U'„': case U'¿': case U'¡':
      return true;
    default:
      return false;
  }
}

bool IsClosingPunct(char32_t cp) {
  switch (cp) {
    case ')': case ']': case '}': case '"': case '\'':
    case U'»': case U'”': case U'’':
      return true;
    default:
      return false;
  }
}

bool IsTrailingPunct(char32_t cp) {
  return IsClosingPunct(cp) || cp == ',' || cp == ';' || cp == ':' ||
         cp == '!' || cp == '?' || cp == U'…';
}

bool IsTerminator(char32_t cp) {
  return cp == '.' || cp == '!' || cp == '?' || cp == U'…';
}

}  // namespace

std::string BioTag::ToString() const {
  switch (prefix) {
    case Prefix::kOutside:
      return "O";
    case Prefix::kBegin:
      return "B-" + std::string(ClassCode(cls));
    case Prefix::kInside:
      return "I-" + std::string(ClassCode(cls));
  }
  return "O";
}

std::optional<BioTag> BioTag::Parse(std::string_view text) {
  if (text == "O") return Outside();
  if (text.size() != 5 || text[1] != '-') return std::nullopt;
  auto cls = ParseClassCode(text.substr(2));
  if (!cls) return std::nullopt;
  if (text[0] == 'B') return Begin(*cls);
  if (text[0] == 'I') return Inside(*cls);
  return std::nullopt;
}

bool IsWellFormed(const TaggedSentence &sentence) {
  const TaggedToken *previous = nullptr;
  for (const auto &token : sentence.tokens) {
    if (token.text.empty()) return false;
    if (token.tag.IsOutside() && token.origin) return false;
    if (token.tag.prefix == BioTag::Prefix::kInside) {
      if (!previous || previous->tag.IsOutside() ||
          previous->tag.cls != token.tag.cls) {
        return false;
      }
      if (previous->origin && token.origin && previous->origin != token.origin) {
        return false;
      }
    }
    previous = &token;
  }
  return true;
}

AbbreviationList AbbreviationList::Default() {
  AbbreviationList list;
  for (const auto &line : ReadListLines(kDefaultAbbreviations)) list.Add(line);
  return list;
}

AbbreviationList AbbreviationList::Load(std::istream &in) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  AbbreviationList list;
  for (const auto &line : ReadListLines(buffer.str())) list.Add(line);
  return list;
}

AbbreviationList AbbreviationList::LoadFile(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open abbreviations " + path.string());
  return Load(in);
}

void AbbreviationList::Add(std::string_view abbreviation) {
  std::string_view trimmed = Trim(abbreviation);
  while (!trimmed.empty() && trimmed.back() == '.') trimmed.remove_suffix(1);
  if (!trimmed.empty()) entries_.insert(FoldCase(trimmed));
}

bool AbbreviationList::Contains(std::string_view word) const {
  return !word.empty() && entries_.count(FoldCase(word)) > 0;
}

std::string_view DefaultAbbreviationText() { return kDefaultAbbreviations; }

bool RuleTokenizer::KeepsPeriod(std::string_view word) const {
  // Strip opening punctuation glued to the word.
  size_t pos = 0;
  while (pos < word.size()) {
    size_t length;
    if (!IsOpeningPunct(DecodeUtf8At(word, pos, &length))) break;
    pos += length;
  }
  word = word.substr(pos);
  if (word.empty()) return false;
  if (abbreviations_.Contains(word)) return true;
  size_t length;
  const char32_t first = DecodeUtf8At(word, 0, &length);
  if (length == word.size() && IsWordChar(first) && !IsDigit(first)) return true;
  // Dotted forms such as "S.A" or "U.S".
  return word.find('.') != std::string_view::npos && IsWordChar(first);
}

std::vector<SentenceSpan> RuleTokenizer::SplitSentences(
    std::string_view text) const {
  std::vector<SentenceSpan> sentences;
  size_t begin = std::string_view::npos;
  size_t last_end = 0;  // end of the last non-space character
  auto close = [&](size_t end) {
    if (begin != std::string_view::npos && end > begin) {
      sentences.push_back({Span{begin, end}, {}});
    }
    begin = std::string_view::npos;
  };

  size_t pos = 0;
  while (pos < text.size()) {
    size_t length;
    const char32_t cp = DecodeUtf8At(text, pos, &length);
    if (IsSpace(cp)) {
      size_t newlines = 0;
      size_t run_end = pos;
      while (run_end < text.size()) {
        size_t l;
        const char32_t c = DecodeUtf8At(text, run_end, &l);
        if (!IsSpace(c)) break;
        if (c == '\n') ++newlines;
        run_end += l;
      }
      if (newlines >= 2) close(last_end);
      pos = run_end;
      continue;
    }
    if (begin == std::string_view::npos) begin = pos;

    if (!IsTerminator(cp)) {
      pos += length;
      last_end = pos;
      continue;
    }

    // Terminator run plus closing punctuation.
    size_t run_end = pos;
    size_t terminators = 0;
    bool only_periods = true;
    while (run_end < text.size()) {
      size_t l;
      const char32_t c = DecodeUtf8At(text, run_end, &l);
      if (IsTerminator(c)) {
        ++terminators;
        if (c != '.') only_periods = false;
      } else if (!IsClosingPunct(c)) {
        break;
      }
      run_end += l;
    }
    last_end = run_end;

    bool boundary = false;
    if (run_end >= text.size()) {
      boundary = true;
    } else {
      size_t l;
      if (IsSpace(DecodeUtf8At(text, run_end, &l))) {
        size_t next = run_end;
        while (next < text.size()) {
          const char32_t c = DecodeUtf8At(text, next, &l);
          if (!IsSpace(c)) break;
          next += l;
        }
        if (next >= text.size()) {
          boundary = true;
        } else {
          char32_t c = DecodeUtf8At(text, next, &l);
          if (IsOpeningPunct(c) && next + l < text.size()) {
            c = DecodeUtf8At(text, next + l, &l);
          }
          boundary = IsUppercase(c) || IsDigit(c);
        }
      }
    }
    if (boundary && only_periods && terminators == 1) {
      // Word right before the period.
      size_t word_begin = pos;
      while (word_begin > begin && !IsSpace(DecodeUtf8Before(text, word_begin))) {
        do {
          --word_begin;
        } while (word_begin > 0 &&
                 (static_cast<unsigned char>(text[word_begin]) & 0xC0) == 0x80);
      }
      if (KeepsPeriod(text.substr(word_begin, pos - word_begin))) {
        boundary = false;
      }
    }
    if (boundary) close(run_end);
    pos = run_end;
  }
  close(last_end);
  return sentences;
}

SentenceSpan RuleTokenizer::SplitWords(SentenceSpan sentence,
                                       std::string_view text) const {
  sentence.tokens.clear();
  auto emit = [&](size_t a, size_t b) {
    if (b > a) {
      sentence.tokens.push_back({Span{a, b}, std::string(text.substr(a, b - a))});
    }
  };
  size_t pos = sentence.span.begin;
  const size_t end = std::min(sentence.span.end, text.size());
  while (pos < end) {
    size_t length;
    if (IsSpace(DecodeUtf8At(text, pos, &length))) {
      pos += length;
      continue;
    }
    size_t chunk_end = pos;
    while (chunk_end < end) {
      size_t l;
      if (IsSpace(DecodeUtf8At(text, chunk_end, &l))) break;
      chunk_end += l;
    }

    size_t a = pos;
    size_t b = chunk_end;
    // Leading punctuation, one token per character.
    while (a < b) {
      size_t l;
      if (!IsOpeningPunct(DecodeUtf8At(text, a, &l)) || a + l >= b) break;
      emit(a, a + l);
      a += l;
    }
    // Trailing punctuation, collected back to front.
    std::vector<Span> trailing;
    while (b > a) {
      const char32_t last = DecodeUtf8Before(text, b);
      size_t l = 1;
      while (l < b - a && (static_cast<unsigned char>(text[b - l]) & 0xC0) == 0x80) {
        ++l;
      }
      if (last == '.') {
        size_t run = b;
        while (run > a && text[run - 1] == '.') --run;
        if (run == a) break;  // the chunk is only periods
        if (b - run == 1 && KeepsPeriod(text.substr(a, run - a))) break;
        trailing.push_back({run, b});
        b = run;
        continue;
      }
      if (!IsTrailingPunct(last) || b - l == a) break;
      trailing.push_back({b - l, b});
      b -= l;
    }
    emit(a, b);
    for (auto it = trailing.rbegin(); it != trailing.rend(); ++it) {
      emit(it->begin, it->end);
    }
    pos = chunk_end;
  }
  return sentence;
}

std::vector<SentenceSpan> RepairCrossSentence(std::vector<SentenceSpan> sentences,
                                              const std::vector<Mention> &mentions) {
  if (sentences.size() < 2) return sentences;
  // join_next[i]: sentence i merges with sentence i + 1.
  std::vector<bool> join_next(sentences.size(), false);
  for (const auto &mention : mentions) {
    auto first = std::lower_bound(
        sentences.begin(), sentences.end(), mention.span.begin,
        [](const SentenceSpan &s, size_t pos) { return s.span.end <= pos; });
    if (first == sentences.end()) continue;
    size_t i = static_cast<size_t>(first - sentences.begin());
    size_t j = i;
    while (j + 1 < sentences.size() &&
           sentences[j + 1].span.begin < mention.span.end) {
      ++j;
    }
    for (size_t k = i; k < j; ++k) join_next[k] = true;
  }
  std::vector<SentenceSpan> merged;
  merged.reserve(sentences.size());
  for (size_t i = 0; i < sentences.size(); ++i) {
    if (i > 0 && join_next[i - 1]) {
      SentenceSpan &last = merged.back();
      last.span.end = sentences[i].span.end;
      last.tokens.insert(last.tokens.end(),
                         std::make_move_iterator(sentences[i].tokens.begin()),
                         std::make_move_iterator(sentences[i].tokens.end()));
    } else {
      merged.push_back(std::move(sentences[i]));
    }
  }
  return merged;
}

std::vector<TokenSpan> RepairSubword(const std::vector<TokenSpan> &tokens,
                                     const std::vector<Mention> &mentions) {
  struct Piece {
    Span span;
    std::string text;
    int mention;    // index into mentions, -1 outside
    bool fragment;  // produced by splitting a token
  };
  std::vector<Piece> pieces;
  pieces.reserve(tokens.size());
  size_t m = 0;
  for (const auto &token : tokens) {
    while (m < mentions.size() && mentions[m].span.end <= token.span.begin) ++m;
    // Mentions overlapping this token.
    size_t k = m;
    std::vector<size_t> overlapping;
    while (k < mentions.size() && mentions[k].span.begin < token.span.end) {
      if (mentions[k].span.Overlaps(token.span)) overlapping.push_back(k);
      ++k;
    }
    if (overlapping.empty()) {
      pieces.push_back({token.span, token.text, -1, false});
      continue;
    }
    if (overlapping.size() == 1 &&
        mentions[overlapping[0]].span.Contains(token.span)) {
      pieces.push_back({token.span, token.text,
                        static_cast<int>(overlapping[0]), false});
      continue;
    }
    // Cut at every mention boundary strictly inside the token.
    size_t cursor = token.span.begin;
    auto cut = [&](size_t until, int mention) {
      if (until > cursor) {
        pieces.push_back({Span{cursor, until},
                          token.text.substr(cursor - token.span.begin,
                                            until - cursor),
                          mention, true});
        cursor = until;
      }
    };
    for (size_t idx : overlapping) {
      const Span &span = mentions[idx].span;
      cut(std::max(span.begin, token.span.begin), -1);
      cut(std::min(span.end, token.span.end), static_cast<int>(idx));
    }
    cut(token.span.end, -1);
  }

  std::vector<TokenSpan> out;
  out.reserve(pieces.size());
  int last_mention = -1;
  bool last_fragment = false;
  for (auto &piece : pieces) {
    if (!out.empty() && piece.mention >= 0 && piece.mention == last_mention &&
        out.back().span.end == piece.span.begin &&
        (piece.fragment || last_fragment)) {
      out.back().span.end = piece.span.end;
      out.back().text += piece.text;
      last_fragment = true;
      continue;
    }
    out.push_back({piece.span, std::move(piece.text)});
    last_mention = piece.mention;
    last_fragment = piece.fragment;
  }
  return out;
}

TaggedSentence ProjectBio(const SentenceSpan &sentence,
                          const std::vector<Mention> &mentions) {
  TaggedSentence tagged;
  tagged.tokens.reserve(sentence.tokens.size());
  for (const auto &token : sentence.tokens) {
    tagged.tokens.push_back({token.text, BioTag::Outside(), std::nullopt});
  }
  const auto &tokens = sentence.tokens;
  auto it = std::lower_bound(
      mentions.begin(), mentions.end(), sentence.span.begin,
      [](const Mention &m, size_t pos) { return m.span.end <= pos; });
  for (; it != mentions.end() && it->span.begin < sentence.span.end; ++it) {
    const Mention &mention = *it;
    if (!sentence.span.Contains(mention.span)) {
      throw AlignmentError("mention crosses a sentence boundary");
    }
    auto first = std::lower_bound(
        tokens.begin(), tokens.end(), mention.span.begin,
        [](const TokenSpan &t, size_t pos) { return t.span.begin < pos; });
    if (first == tokens.end() || first->span.begin != mention.span.begin) {
      throw AlignmentError("mention does not start on a token boundary");
    }
    auto last = first;
    while (last != tokens.end() && last->span.end < mention.span.end) ++last;
    if (last == tokens.end() || last->span.end != mention.span.end) {
      throw AlignmentError("mention does not end on a token boundary");
    }
    for (auto t = first; t <= last; ++t) {
      auto &out = tagged.tokens[static_cast<size_t>(t - tokens.begin())];
      out.tag = t == first ? BioTag::Begin(mention.cls)
                           : BioTag::Inside(mention.cls);
      out.origin = mention.origin;
    }
  }
  return tagged;
}

}  // namespace silverner

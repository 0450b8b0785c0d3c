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

#include "silverner/corpus.h"

#include <algorithm>

#include "json.hpp"
#include "silverner/text_util.h"

namespace silverner {

bool HasAnnotatedToken(const TaggedSentence &sentence) {
  return std::any_of(sentence.tokens.begin(), sentence.tokens.end(),
                     [](const TaggedToken &token) {
                       return token.origin == Origin::kAnnotated;
                     });
}

std::vector<TaggedSentence> FilterAnnotated(std::vector<TaggedSentence> sentences) {
  std::erase_if(sentences, [](const TaggedSentence &sentence) {
    return !HasAnnotatedToken(sentence);
  });
  return sentences;
}

uint64_t WriteSentence(const TaggedSentence &sentence, std::ostream &out,
                       bool with_origin) {
  if (sentence.tokens.empty()) return 0;
  std::string buffer;
  for (const auto &token : sentence.tokens) {
    if (token.text.empty() ||
        token.text.find_first_of(" \t\r\n\v\f") != std::string::npos) {
      throw std::invalid_argument("token '" + token.text +
                                  "' cannot be written as a corpus line");
    }
    buffer += token.text;
    buffer += '\t';
    buffer += token.tag.ToString();
    if (with_origin) {
      buffer += '\t';
      buffer += token.origin ? OriginCode(*token.origin) : "-";
    }
    buffer += '\n';
  }
  buffer += '\n';
  out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  if (!out) throw std::runtime_error("corpus write failed");
  return buffer.size();
}

uint64_t WriteCorpus(const Corpus &corpus, std::ostream &out, bool with_origin) {
  uint64_t bytes = 0;
  for (const auto &sentence : corpus.sentences) {
    bytes += WriteSentence(sentence, out, with_origin);
  }
  out.flush();
  if (!out) throw std::runtime_error("corpus write failed");
  return bytes;
}

Corpus ReadCorpus(std::istream &in) {
  Corpus corpus;
  TaggedSentence current;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (!current.tokens.empty()) corpus.sentences.push_back(std::move(current));
      current = {};
      continue;
    }
    const size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw CorpusFormatError("expected token<TAB>tag", line_number);
    }
    const size_t tab2 = line.find('\t', tab + 1);
    const std::string_view rest(line.data() + tab + 1,
                                (tab2 == std::string::npos ? line.size() : tab2) -
                                    tab - 1);
    auto tag = BioTag::Parse(rest);
    if (!tag) {
      throw CorpusFormatError("unknown tag '" + std::string(rest) + "'",
                              line_number);
    }
    TaggedToken token{line.substr(0, tab), *tag, std::nullopt};
    if (tab2 != std::string::npos) {
      const std::string_view origin(line.data() + tab2 + 1,
                                    line.size() - tab2 - 1);
      if (origin != "-") {
        auto parsed = ParseOriginCode(origin);
        if (!parsed) {
          throw CorpusFormatError("unknown origin '" + std::string(origin) + "'",
                                  line_number);
        }
        if (tag->IsOutside()) {
          throw CorpusFormatError("origin on an O token", line_number);
        }
        token.origin = *parsed;
      }
    }
    if (tag->prefix == BioTag::Prefix::kInside) {
      const TaggedToken *previous =
          current.tokens.empty() ? nullptr : &current.tokens.back();
      if (!previous || previous->tag.IsOutside() ||
          previous->tag.cls != tag->cls) {
        throw CorpusFormatError(tag->ToString() + " does not continue an entity",
                                line_number);
      }
    }
    current.tokens.push_back(std::move(token));
  }
  if (!current.tokens.empty()) corpus.sentences.push_back(std::move(current));
  return corpus;
}

std::string ProvenanceJson(const Provenance &provenance) {
  nlohmann::ordered_json json;
  json["dump"] = {{"path", provenance.dump},
                  {"bytes", provenance.dump_bytes},
                  {"crc32", provenance.dump_crc32}};
  json["catalog"] = {{"path", provenance.catalog},
                     {"bytes", provenance.catalog_bytes},
                     {"crc32", provenance.catalog_crc32}};
  json["tool_version"] = provenance.tool_version;
  return json.dump(2) + "\n";
}

std::string InspectCorpus(const Corpus &corpus, size_t begin, size_t end) {
  std::string out;
  end = std::min(end, corpus.sentences.size());
  for (size_t i = begin; i < end; ++i) {
    const TaggedSentence &sentence = corpus.sentences[i];
    auto columns = [](const std::string &text) {
      return ScalarByteOffsets(text).size() - 1;
    };
    size_t width = 0;
    for (const auto &token : sentence.tokens) {
      width = std::max(width, columns(token.text));
    }
    out += "# sentence " + std::to_string(i) + "\n";
    for (const auto &token : sentence.tokens) {
      out += "  " + token.text + std::string(width - columns(token.text) + 2, ' ');
      out += token.tag.ToString();
      if (token.origin) {
        out += " (";
        out += OriginCode(*token.origin);
        out += ")";
      }
      out += "\n";
    }
    out += "\n";
  }
  return out;
}

}  // namespace silverner

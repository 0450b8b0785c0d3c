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

#include "silverner/wikitext_clean.h"

#include <algorithm>
#include <optional>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "silverner/text_util.h"
#include "silverner/wiki_ingest.h"

namespace silverner {

namespace {

constexpr std::string_view kDefaultBlocklist = R"(# Lists
unbulleted list
ubl
flatlist
flat list
plainlist
plain list
bulleted list
hlist
lista
div col
colunas
refbegin
# Tables and table-like templates
infobox
info/
caixa
table
tabela
categorytree
navbox
sidebar
barra lateral
clade
taxobox
election box
# Files and media
gallery
galeria
multiple image
imagem múltipla
media
archive
audio
áudio
listen
video
vídeo
# Domain specific
chem
chembox
math
mvar
formula
fórmula
# Irregular indentation
outdent
)";

// Tags whose whole region, content included, carries no prose.
constexpr std::array<std::string_view, 17> kDroppedTags = {
    "math",     "chem",  "ce",        "gallery",         "imagemap",
    "timeline", "score", "graph",     "ref",             "references",
    "mapframe", "maplink", "syntaxhighlight", "source",  "hiero",
    "inputbox", "templatedata"};

constexpr std::array<std::string_view, 8> kFilteredSections = {
    "references",  "see also",   "bibliography", "external links",
    "referências", "ver também", "bibliografia", "ligações externas"};

std::string NormalizeTemplateName(std::string_view raw) {
  std::string name(raw);
  std::replace(name.begin(), name.end(), '_', ' ');
  name = FoldCase(CollapseWhitespace(name));
  for (std::string_view prefix : {"template:", "predefinição:", "msg:"}) {
    if (name.starts_with(prefix)) {
      name = std::string(Trim(std::string_view(name).substr(prefix.size())));
      break;
    }
  }
  return name;
}

bool StartsWithAt(std::string_view text, size_t pos, std::string_view token) {
  return text.compare(pos, token.size(), token) == 0;
}

// Given text[pos] == "{{", returns the index one past the matching "}}", or
// npos when unbalanced.
size_t FindTemplateEnd(std::string_view text, size_t pos) {
  int depth = 0;
  while (pos + 1 < text.size()) {
    if (text[pos] == '{' && text[pos + 1] == '{') {
      ++depth;
      pos += 2;
    } else if (text[pos] == '}' && text[pos + 1] == '}') {
      pos += 2;
      if (--depth == 0) return pos;
    } else {
      ++pos;
    }
  }
  return std::string_view::npos;
}

// Given text[pos] == "{|", returns the index one past the matching "|}".
size_t FindTableEnd(std::string_view text, size_t pos) {
  int depth = 0;
  while (pos + 1 < text.size()) {
    if (text[pos] == '{' && text[pos + 1] == '|') {
      ++depth;
      pos += 2;
    } else if (text[pos] == '|' && text[pos + 1] == '}') {
      pos += 2;
      if (--depth == 0) return pos;
    } else {
      ++pos;
    }
  }
  return std::string_view::npos;
}

// Given text[pos] == "[[", returns the index one past the matching "]]".
size_t FindBracketLinkEnd(std::string_view text, size_t pos) {
  int depth = 0;
  while (pos + 1 < text.size()) {
    if (text[pos] == '[' && text[pos + 1] == '[') {
      ++depth;
      pos += 2;
    } else if (text[pos] == ']' && text[pos + 1] == ']') {
      pos += 2;
      if (--depth == 0) return pos;
    } else {
      ++pos;
    }
  }
  return std::string_view::npos;
}

struct Tag {
  std::string name;  // lower-case
  bool closing = false;
  bool self_closing = false;
  size_t end = 0;  // one past '>'
};

// Parses an HTML-like tag at text[pos] == '<'.
std::optional<Tag> ParseTag(std::string_view text, size_t pos) {
  size_t i = pos + 1;
  Tag tag;
  if (i < text.size() && text[i] == '/') {
    tag.closing = true;
    ++i;
  }
  const size_t name_begin = i;
  while (i < text.size() && std::isalnum(static_cast<unsigned char>(text[i]))) {
    ++i;
  }
  if (i == name_begin || !std::isalpha(static_cast<unsigned char>(text[name_begin]))) {
    return std::nullopt;
  }
  if (i < text.size() && !(text[i] == '>' || text[i] == '/' ||
                           std::isspace(static_cast<unsigned char>(text[i])))) {
    return std::nullopt;
  }
  for (size_t k = name_begin; k < i; ++k) {
    tag.name.push_back(static_cast<char>(
        std::tolower(static_cast<unsigned char>(text[k]))));
  }
  const size_t close = text.find('>', i);
  if (close == std::string_view::npos) return std::nullopt;
  const std::string_view attrs = text.substr(i, close - i);
  if (attrs.find('<') != std::string_view::npos) return std::nullopt;
  tag.self_closing = !attrs.empty() && attrs.back() == '/';
  tag.end = close + 1;
  return tag;
}

bool IsDroppedTag(std::string_view name) {
  return std::find(kDroppedTags.begin(), kDroppedTags.end(), name) !=
         kDroppedTags.end();
}

// Finds the end of the closing tag "</name ...>" starting the search at pos.
size_t FindClosingTag(std::string_view text, size_t pos, std::string_view name) {
  while (true) {
    pos = text.find("</", pos);
    if (pos == std::string_view::npos) return pos;
    auto tag = ParseTag(text, pos);
    if (tag && tag->closing && tag->name == name) return tag->end;
    pos += 2;
  }
}

size_t CopyOpaque(std::string_view src, size_t pos, std::string *out) {
  size_t end;
  if (StartsWithAt(src, pos, "<!--")) {
    end = src.find("-->", pos + 4);
    end = end == std::string_view::npos ? src.size() : end + 3;
  } else {
    end = FindClosingTag(src, pos + 8, "nowiki");
    if (end == std::string_view::npos) end = src.size();
  }
  out->append(src.substr(pos, end - pos));
  return end;
}

bool IsNowikiOpen(std::string_view src, size_t pos) {
  return StartsWithIgnoreCase(src.substr(pos), "<nowiki>");
}

std::string StripPass(std::string_view src, const TemplateBlocklist &blocklist,
                      CleanCounters *counters) {
  std::string out;
  out.reserve(src.size());
  size_t i = 0;
  while (i < src.size()) {
    if (StartsWithAt(src, i, "<!--") || IsNowikiOpen(src, i)) {
      i = CopyOpaque(src, i, &out);
      continue;
    }
    if (StartsWithAt(src, i, "{{")) {
      size_t name_end = i + 2;
      while (name_end < src.size() && src[name_end] != '|' &&
             src[name_end] != '}' && src[name_end] != '{') {
        ++name_end;
      }
      if (blocklist.Matches(NormalizeTemplateName(
              src.substr(i + 2, name_end - i - 2)))) {
        const size_t end = FindTemplateEnd(src, i);
        ++counters->templates_removed;
        if (end == std::string_view::npos) {
          ++counters->malformed;
          break;
        }
        i = end;
        continue;
      }
      out.append("{{");
      i += 2;
      continue;
    }
    if (StartsWithAt(src, i, "{|")) {
      const size_t end = FindTableEnd(src, i);
      ++counters->tables_removed;
      if (end == std::string_view::npos) {
        ++counters->malformed;
        break;
      }
      i = end;
      continue;
    }
    if (StartsWithAt(src, i, "[[") && IsFileTarget(src.substr(i + 2, 64))) {
      const size_t end = FindBracketLinkEnd(src, i);
      ++counters->files_removed;
      if (end == std::string_view::npos) {
        ++counters->malformed;
        break;
      }
      i = end;
      continue;
    }
    if (src[i] == '<') {
      auto tag = ParseTag(src, i);
      if (tag && !tag->closing && IsDroppedTag(tag->name)) {
        ++counters->tags_removed;
        if (tag->self_closing) {
          i = tag->end;
          continue;
        }
        const size_t end = FindClosingTag(src, tag->end, tag->name);
        if (end == std::string_view::npos) {
          ++counters->malformed;
          break;
        }
        i = end;
        continue;
      }
    }
    out.push_back(src[i]);
    ++i;
  }

  // Lines opened by ':' indentation chains.
  std::string kept;
  kept.reserve(out.size());
  size_t start = 0;
  while (start < out.size()) {
    size_t end = out.find('\n', start);
    end = end == std::string::npos ? out.size() : end + 1;
    if (out[start] == ':') {
      ++counters->indented_lines_removed;
    } else {
      kept.append(out, start, end - start);
    }
    start = end;
  }
  return kept;
}

struct Heading {
  int level = 0;
  size_t title_begin = 0;  // relative to the line
  size_t title_end = 0;
};

std::optional<Heading> ParseHeading(std::string_view line) {
  const std::string_view trimmed = Trim(line);
  if (trimmed.size() < 3 || line.front() != '=' || trimmed.back() != '=') {
    return std::nullopt;
  }
  size_t left = 0;
  while (left < trimmed.size() && trimmed[left] == '=') ++left;
  size_t right = 0;
  while (right < trimmed.size() && trimmed[trimmed.size() - 1 - right] == '=') {
    ++right;
  }
  const size_t level = std::min({left, right, size_t{6}});
  if (2 * level >= trimmed.size()) return std::nullopt;
  size_t begin = level;
  size_t end = trimmed.size() - level;
  while (begin < end && std::isspace(static_cast<unsigned char>(trimmed[begin]))) {
    ++begin;
  }
  while (end > begin && std::isspace(static_cast<unsigned char>(trimmed[end - 1]))) {
    --end;
  }
  if (begin == end) return std::nullopt;
  return Heading{static_cast<int>(level), begin, end};
}

bool IsFilteredSection(std::string_view title) {
  std::string normalized = FoldCase(CollapseWhitespace(title));
  while (!normalized.empty() && normalized.back() == ':') normalized.pop_back();
  return std::find(kFilteredSections.begin(), kFilteredSections.end(),
                   normalized) != kFilteredSections.end();
}

// Renders wikitext into display text, tracking link anchors.
class Renderer {
 public:
  Renderer(std::string_view src, CleanCounters *counters)
      : src_(src), counters_(counters) {}

  RenderedText Run() {
    out_.reserve(src_.size());
    RenderRange(0, src_.size());
    while (!out_.empty() && (out_.back() == ' ' || out_.back() == '\n')) {
      out_.pop_back();
    }
    return {std::move(out_), std::move(anchors_)};
  }

 private:
  void Emit(char c) {
    if (c == '\t' || c == '\r' || c == '\f' || c == '\v') c = ' ';
    if (c == ' ') {
      if (out_.empty() || out_.back() == ' ' || out_.back() == '\n') return;
    } else if (c == '\n') {
      while (!out_.empty() && out_.back() == ' ') out_.pop_back();
      if (out_.empty()) return;
      if (out_.size() >= 2 && out_[out_.size() - 1] == '\n' &&
          out_[out_.size() - 2] == '\n') {
        return;
      }
    } else if (!out_.empty()) {
      const char prev = out_.back();
      if ((prev == '[' && c == '[') || (prev == ']' && c == ']') ||
          (prev == '{' && (c == '{' || c == '|')) || (prev == '}' && c == '}')) {
        return;
      }
    }
    out_.push_back(c);
  }

  void EmitText(std::string_view text) {
    for (char c : text) Emit(c);
  }

  void ParagraphBreak() {
    Emit('\n');
    Emit('\n');
  }

  bool AtLineStart(size_t i) const {
    return link_depth_ == 0 && (i == 0 || src_[i - 1] == '\n');
  }

  void Malformed() {
    if (counters_) ++counters_->malformed;
  }

  void RenderRange(size_t begin, size_t end) {
    const std::string_view src = src_.substr(0, end);
    size_t i = begin;
    while (i < end) {
      if (AtLineStart(i)) {
        size_t eol = src.find('\n', i);
        if (eol == std::string_view::npos) eol = end;
        const std::string_view line = src.substr(i, eol - i);
        if (auto heading = ParseHeading(line)) {
          ParagraphBreak();
          RenderRange(i + heading->title_begin, i + heading->title_end);
          ParagraphBreak();
          i = eol;
          continue;
        }
        if (line.starts_with("----")) {
          size_t j = i;
          while (j < eol && src[j] == '-') ++j;
          i = j;
          continue;
        }
        if (!line.empty() && std::string_view("*#:;").find(line[0]) !=
                                 std::string_view::npos) {
          ParagraphBreak();
          while (i < eol && std::string_view("*#:;").find(src[i]) !=
                                std::string_view::npos) {
            ++i;
          }
          continue;
        }
      }

      const char c = src[i];
      if (c == '<') {
        if (StartsWithAt(src, i, "<!--")) {
          const size_t close = src.find("-->", i + 4);
          i = close == std::string_view::npos ? end : close + 3;
          continue;
        }
        if (auto tag = ParseTag(src, i)) {
          if (tag->name == "nowiki") {
            if (tag->closing || tag->self_closing) {
              i = tag->end;
              continue;
            }
            size_t close = FindClosingTag(src, tag->end, "nowiki");
            size_t content_end = close;
            if (close == std::string_view::npos) {
              close = content_end = end;
            } else {
              content_end = src.rfind("</", close);
            }
            EmitText(src.substr(tag->end, content_end - tag->end));
            i = close;
            continue;
          }
          if (!tag->closing && IsDroppedTag(tag->name)) {
            if (tag->self_closing) {
              i = tag->end;
              continue;
            }
            const size_t close = FindClosingTag(src, tag->end, tag->name);
            if (close == std::string_view::npos) {
              Malformed();
              i = end;
            } else {
              i = close;
            }
            continue;
          }
          if (tag->name == "br" || tag->name == "p" || tag->name == "div") {
            Emit('\n');
          }
          i = tag->end;
          continue;
        }
        Emit(c);
        ++i;
        continue;
      }
      if (c == '[' && StartsWithAt(src, i, "[[")) {
        i = RenderLink(i, end);
        continue;
      }
      if (c == '[') {
        i = RenderExternalLink(i, end);
        continue;
      }
      if (c == '{' && StartsWithAt(src, i, "{{")) {
        const size_t close = FindTemplateEnd(src, i);
        if (close == std::string_view::npos) {
          Malformed();
          i = end;
        } else {
          i = close;
        }
        continue;
      }
      if (c == '{' && StartsWithAt(src, i, "{|")) {
        const size_t close = FindTableEnd(src, i);
        if (close == std::string_view::npos) {
          Malformed();
          i = end;
        } else {
          i = close;
        }
        continue;
      }
      if (c == '\'' && StartsWithAt(src, i, "''")) {
        while (i < end && src[i] == '\'') ++i;
        continue;
      }
      if (c == '_' && StartsWithAt(src, i, "__")) {
        size_t j = i + 2;
        while (j < end && src[j] >= 'A' && src[j] <= 'Z') ++j;
        if (j > i + 2 && StartsWithAt(src, j, "__")) {
          i = j + 2;
          continue;
        }
      }
      if (c == '&') {
        i = RenderEntity(i, end);
        continue;
      }
      Emit(c);
      ++i;
    }
  }

  size_t RenderLink(size_t i, size_t end) {
    const std::string_view src = src_.substr(0, end);
    const size_t close = FindBracketLinkEnd(src, i);
    if (close == std::string_view::npos) {
      Malformed();
      return i + 2;
    }
    const size_t inner_begin = i + 2;
    const size_t inner_end = close - 2;
    // First '|' outside nested links and templates.
    size_t pipe = std::string_view::npos;
    int depth = 0;
    for (size_t k = inner_begin; k < inner_end; ++k) {
      if (k + 1 < inner_end && (StartsWithAt(src, k, "[[") ||
                                StartsWithAt(src, k, "{{"))) {
        ++depth;
        ++k;
      } else if (k + 1 < inner_end && (StartsWithAt(src, k, "]]") ||
                                       StartsWithAt(src, k, "}}"))) {
        --depth;
        ++k;
      } else if (src[k] == '|' && depth == 0) {
        pipe = k;
        break;
      }
    }
    const size_t target_end = pipe == std::string_view::npos ? inner_end : pipe;
    const std::string_view target =
        Trim(src.substr(inner_begin, target_end - inner_begin));
    if (IsFileTarget(target)) return close;
    const std::string title = LinkTargetTitle(target);
    const bool section_link = !target.empty() && target.front() == '#';
    if (title.empty() && !section_link) return close;

    size_t display_begin = inner_begin;
    size_t display_end = target_end;
    if (pipe != std::string_view::npos &&
        !Trim(src.substr(pipe + 1, inner_end - pipe - 1)).empty()) {
      display_begin = pipe + 1;
      display_end = inner_end;
    } else {
      const size_t hash = src.find('#', inner_begin);
      if (hash < target_end && hash > inner_begin) display_end = hash;
    }

    const size_t out_begin = out_.size();
    ++link_depth_;
    RenderRange(display_begin, display_end);
    --link_depth_;
    if (link_depth_ > 0 || title.empty()) return close;

    size_t a = out_begin, b = out_.size();
    while (a < b && (out_[a] == ' ' || out_[a] == '\n')) ++a;
    while (b > a && (out_[b - 1] == ' ' || out_[b - 1] == '\n')) --b;
    if (b > a) anchors_.push_back({title, Span{a, b}});
    return close;
  }

  size_t RenderExternalLink(size_t i, size_t end) {
    const std::string_view src = src_.substr(0, end);
    const std::string_view rest = src.substr(i + 1);
    const bool is_url = rest.starts_with("http://") ||
                        rest.starts_with("https://") ||
                        rest.starts_with("ftp://") || rest.starts_with("//") ||
                        rest.starts_with("mailto:");
    if (!is_url) {
      Emit('[');
      return i + 1;
    }
    const size_t close = src.find(']', i + 1);
    const size_t eol = src.find('\n', i + 1);
    if (close == std::string_view::npos || close > eol) {
      // Bare bracketed URL without a label: drop the URL itself.
      size_t j = i + 1;
      while (j < end && !std::isspace(static_cast<unsigned char>(src[j]))) ++j;
      return j;
    }
    const size_t space = src.find(' ', i + 1);
    if (space != std::string_view::npos && space < close) {
      ++link_depth_;
      RenderRange(space + 1, close);
      --link_depth_;
    }
    return close + 1;
  }

  size_t RenderEntity(size_t i, size_t end) {
    const size_t semi = src_.find(';', i);
    if (semi == std::string_view::npos || semi >= end || semi - i > 10) {
      Emit('&');
      return i + 1;
    }
    const std::string_view name = src_.substr(i + 1, semi - i - 1);
    static constexpr std::pair<std::string_view, std::string_view> kNamed[] = {
        {"nbsp", "\u00A0"},   {"amp", "&"},     {"lt", "<"},      {"gt", ">"},
        {"quot", "\""},   {"apos", "'"},    {"ndash", "–"},   {"mdash", "—"},
        {"hellip", "…"},  {"laquo", "«"},   {"raquo", "»"},   {"thinsp", " "},
        {"ensp", " "},    {"emsp", " "},    {"shy", ""},      {"zwj", ""},
        {"zwnj", ""},     {"minus", "−"},   {"times", "×"},   {"deg", "°"}};
    for (const auto &[entity, value] : kNamed) {
      if (name == entity) {
        EmitText(value);
        return semi + 1;
      }
    }
    if (name.size() >= 2 && name[0] == '#') {
      const bool hex = name[1] == 'x' || name[1] == 'X';
      const std::string digits(name.substr(hex ? 2 : 1));
      char *parse_end = nullptr;
      const unsigned long cp = std::strtoul(digits.c_str(), &parse_end, hex ? 16 : 10);
      if (!digits.empty() && parse_end && *parse_end == '\0' && cp > 0 &&
          cp <= 0x10FFFF && !(cp >= 0xD800 && cp <= 0xDFFF)) {
        std::string utf8;
        AppendUtf8(&utf8, static_cast<char32_t>(cp));
        EmitText(utf8);
        return semi + 1;
      }
    }
    Emit('&');
    return i + 1;
  }

  std::string_view src_;
  CleanCounters *counters_;
  std::string out_;
  std::vector<Anchor> anchors_;
  int link_depth_ = 0;
};

}  // namespace

std::string_view DefaultTemplateBlocklistText() { return kDefaultBlocklist; }

TemplateBlocklist TemplateBlocklist::Default() {
  TemplateBlocklist blocklist;
  for (const auto &line : ReadListLines(kDefaultBlocklist)) blocklist.Add(line);
  return blocklist;
}

TemplateBlocklist TemplateBlocklist::Load(std::istream &in) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  TemplateBlocklist blocklist;
  for (const auto &line : ReadListLines(buffer.str())) blocklist.Add(line);
  return blocklist;
}

TemplateBlocklist TemplateBlocklist::LoadFile(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open blocklist " + path.string());
  return Load(in);
}

void TemplateBlocklist::Add(std::string_view prefix) {
  std::string normalized = NormalizeTemplateName(prefix);
  if (normalized.empty()) return;
  if (std::find(prefixes_.begin(), prefixes_.end(), normalized) == prefixes_.end()) {
    prefixes_.push_back(std::move(normalized));
  }
}

bool TemplateBlocklist::Matches(std::string_view template_name) const {
  const std::string name = NormalizeTemplateName(template_name);
  if (name.empty()) return false;
  for (const auto &prefix : prefixes_) {
    if (name.starts_with(prefix)) return true;
  }
  return false;
}

std::string StripElements(std::string_view wikitext,
                          const TemplateBlocklist &blocklist,
                          CleanCounters *counters) {
  CleanCounters local;
  CleanCounters *sink = counters ? counters : &local;
  std::string current = StripPass(wikitext, blocklist, sink);
  // Removal can splice new constructs together; iterate to a fixed point.
  CleanCounters scratch;
  for (int round = 0; round < 16; ++round) {
    std::string next = StripPass(current, blocklist, &scratch);
    if (next == current) break;
    current = std::move(next);
  }
  return current;
}

std::string FilterSections(std::string_view wikitext, CleanCounters *counters) {
  std::string out;
  out.reserve(wikitext.size());
  int skip_level = 0;
  size_t start = 0;
  while (start < wikitext.size()) {
    size_t end = wikitext.find('\n', start);
    end = end == std::string_view::npos ? wikitext.size() : end + 1;
    std::string_view line = wikitext.substr(start, end - start);
    std::string_view content = line;
    if (!content.empty() && content.back() == '\n') content.remove_suffix(1);
    if (auto heading = ParseHeading(content)) {
      if (skip_level > 0 && heading->level <= skip_level) skip_level = 0;
      if (skip_level == 0 &&
          IsFilteredSection(content.substr(
              heading->title_begin, heading->title_end - heading->title_begin))) {
        skip_level = heading->level;
        if (counters) ++counters->sections_removed;
      }
    }
    if (skip_level == 0) out.append(line);
    start = end;
  }
  return out;
}

RenderedText RenderPlain(std::string_view wikitext, CleanCounters *counters) {
  return Renderer(wikitext, counters).Run();
}

CleanArticle CleanWikitext(const Article &article,
                           const TemplateBlocklist &blocklist,
                           CleanCounters *counters) {
  const std::string normalized = NormalizeNfc(article.wikitext);
  const std::string stripped = StripElements(normalized, blocklist, counters);
  const std::string filtered = FilterSections(stripped, counters);
  RenderedText rendered = RenderPlain(filtered, counters);
  return {article.article_id, std::move(rendered.text),
          std::move(rendered.anchors)};
}

}  // namespace silverner

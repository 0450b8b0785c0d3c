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

#include "silverner/wiki_ingest.h"

#include <expat.h>
#include <zlib.h>

#include <charconv>
#include <cstring>

#include "silverner/entity_catalog.h"
#include "silverner/text_util.h"

namespace silverner {

namespace {

constexpr size_t kChunkSize = 1 << 20;

bool IsRedirectText(std::string_view text) {
  text = Trim(text);
  return StartsWithIgnoreCase(text, "#REDIRECT") ||
         StartsWithIgnoreCase(text, "#REDIRECIONAMENTO");
}

}  // namespace

class DumpReader::Impl {
 public:
  Impl(DumpReader *owner, std::istream &in) : owner_(owner), in_(in) {
    parser_ = XML_ParserCreate("UTF-8");
    XML_SetUserData(parser_, this);
    XML_SetElementHandler(parser_, &Impl::OnStart, &Impl::OnEnd);
    XML_SetCharacterDataHandler(parser_, &Impl::OnText);
    raw_.resize(kChunkSize);
    decoded_.resize(kChunkSize);
  }

  ~Impl() {
    XML_ParserFree(parser_);
    if (gzip_) inflateEnd(&zstream_);
  }

  // Feeds one chunk to the parser. Returns false once input is exhausted.
  bool Pump() {
    if (finished_) return false;
    const size_t got = ReadDecoded();
    if (got == 0) {
      finished_ = true;
      if (total_decoded_ == 0) return false;
      Parse(nullptr, 0, true);
      return false;
    }
    total_decoded_ += got;
    Parse(decoded_.data(), got, false);
    return true;
  }

  uint64_t raw_bytes = 0;
  uint32_t crc = 0;

 private:
  void Parse(const char *data, size_t size, bool final) {
    if (XML_Parse(parser_, data, static_cast<int>(size), final) ==
        XML_STATUS_ERROR) {
      throw DumpError(
          std::string("XML error: ") +
              XML_ErrorString(XML_GetErrorCode(parser_)),
          static_cast<uint64_t>(XML_GetCurrentByteIndex(parser_)));
    }
  }

  size_t ReadRaw() {
    in_.read(raw_.data(), static_cast<std::streamsize>(raw_.size()));
    const auto got = static_cast<size_t>(in_.gcount());
    raw_bytes += got;
    crc = static_cast<uint32_t>(
        crc32(crc, reinterpret_cast<const Bytef *>(raw_.data()),
              static_cast<uInt>(got)));
    return got;
  }

  size_t ReadDecoded() {
    if (!sniffed_) {
      sniffed_ = true;
      raw_len_ = ReadRaw();
      gzip_ = raw_len_ >= 2 && static_cast<unsigned char>(raw_[0]) == 0x1f &&
              static_cast<unsigned char>(raw_[1]) == 0x8b;
      if (gzip_) {
        std::memset(&zstream_, 0, sizeof(zstream_));
        if (inflateInit2(&zstream_, 16 + MAX_WBITS) != Z_OK) {
          throw DumpError("cannot initialize gzip decoder", 0);
        }
        zstream_.next_in = reinterpret_cast<Bytef *>(raw_.data());
        zstream_.avail_in = static_cast<uInt>(raw_len_);
      } else {
        std::memcpy(decoded_.data(), raw_.data(), raw_len_);
        return raw_len_;
      }
    }
    if (!gzip_) {
      const size_t got = ReadRaw();
      std::memcpy(decoded_.data(), raw_.data(), got);
      return got;
    }
    return Inflate();
  }

  size_t Inflate() {
    zstream_.next_out = reinterpret_cast<Bytef *>(decoded_.data());
    zstream_.avail_out = static_cast<uInt>(decoded_.size());
    while (zstream_.avail_out > 0) {
      if (zstream_.avail_in == 0) {
        const size_t got = ReadRaw();
        if (got == 0) break;
        zstream_.next_in = reinterpret_cast<Bytef *>(raw_.data());
        zstream_.avail_in = static_cast<uInt>(got);
      }
      const int rc = inflate(&zstream_, Z_NO_FLUSH);
      if (rc == Z_STREAM_END) {
        // Concatenated gzip members.
        inflateReset(&zstream_);
        continue;
      }
      if (rc != Z_OK && rc != Z_BUF_ERROR) {
        throw DumpError("gzip decode error", raw_bytes);
      }
      if (rc == Z_BUF_ERROR && zstream_.avail_in == 0) continue;
    }
    return decoded_.size() - zstream_.avail_out;
  }

  static void XMLCALL OnStart(void *data, const XML_Char *name,
                              const XML_Char **attrs) {
    static_cast<Impl *>(data)->Start(name, attrs);
  }
  static void XMLCALL OnEnd(void *data, const XML_Char *name) {
    static_cast<Impl *>(data)->End(name);
  }
  static void XMLCALL OnText(void *data, const XML_Char *text, int length) {
    auto *self = static_cast<Impl *>(data);
    if (self->capture_) self->capture_->append(text, static_cast<size_t>(length));
  }

  void Start(const char *name, const char ** /*attrs*/) {
    const std::string_view element(name);
    const std::string_view parent =
        stack_.empty() ? std::string_view() : std::string_view(stack_.back());
    stack_.emplace_back(element);
    capture_ = nullptr;
    if (element == "page") {
      in_page_ = true;
      title_.clear();
      ns_.clear();
      id_.clear();
      text_.clear();
      has_id_ = false;
      redirect_ = false;
      return;
    }
    if (!in_page_) return;
    if (parent == "page") {
      if (element == "title") {
        capture_ = &title_;
      } else if (element == "ns") {
        capture_ = &ns_;
      } else if (element == "id" && !has_id_) {
        capture_ = &id_;
      } else if (element == "redirect") {
        redirect_ = true;
      }
    } else if (parent == "revision" && element == "text") {
      // Later revisions replace earlier ones.
      text_.clear();
      capture_ = &text_;
    }
  }

  void End(const char *name) {
    const std::string_view element(name);
    if (in_page_ && element == "id" && capture_ == &id_) has_id_ = true;
    capture_ = nullptr;
    if (!stack_.empty()) stack_.pop_back();
    if (element == "page") {
      in_page_ = false;
      FinishPage();
    }
  }

  void FinishPage() {
    auto &counters = owner_->counters_;
    ++counters.pages;
    int64_t ns = 0;
    const std::string_view ns_text = Trim(ns_);
    if (!ns_text.empty()) {
      auto [ptr, ec] =
          std::from_chars(ns_text.data(), ns_text.data() + ns_text.size(), ns);
      if (ec != std::errc() || ptr != ns_text.data() + ns_text.size()) ns = -1;
    }
    if (ns != 0) {
      ++counters.namespace_skipped;
      return;
    }
    if (redirect_ || IsRedirectText(text_)) {
      ++counters.redirects_skipped;
      return;
    }
    Article article;
    const std::string_view id_text = Trim(id_);
    auto [ptr, ec] = std::from_chars(
        id_text.data(), id_text.data() + id_text.size(), article.article_id);
    if (ec != std::errc() || id_text.empty()) {
      throw DumpError("page without a numeric <id> ('" + title_ + "')",
                      static_cast<uint64_t>(XML_GetCurrentByteIndex(parser_)));
    }
    article.title = std::move(title_);
    article.wikitext = std::move(text_);
    ++counters.articles;
    owner_->ready_.push_back(std::move(article));
  }

  DumpReader *owner_;
  std::istream &in_;
  XML_Parser parser_;
  std::vector<char> raw_;
  std::vector<char> decoded_;
  size_t raw_len_ = 0;
  bool sniffed_ = false;
  bool gzip_ = false;
  bool finished_ = false;
  uint64_t total_decoded_ = 0;
  z_stream zstream_{};

  std::vector<std::string> stack_;
  std::string *capture_ = nullptr;
  bool in_page_ = false;
  bool has_id_ = false;
  bool redirect_ = false;
  std::string title_, ns_, id_, text_;
};

DumpReader::DumpReader(std::istream &in)
    : impl_(std::make_unique<Impl>(this, in)) {}

DumpReader::DumpReader(const std::filesystem::path &path)
    : owned_(std::make_unique<std::ifstream>(path, std::ios::binary)) {
  if (!*owned_) throw std::runtime_error("cannot open dump " + path.string());
  impl_ = std::make_unique<Impl>(this, *owned_);
}

DumpReader::~DumpReader() = default;

bool DumpReader::Next(Article *article) {
  while (ready_.empty()) {
    if (!impl_->Pump() && ready_.empty()) return false;
  }
  *article = std::move(ready_.front());
  ready_.pop_front();
  return true;
}

uint64_t DumpReader::raw_bytes() const { return impl_->raw_bytes; }
uint32_t DumpReader::raw_crc32() const { return impl_->crc; }

namespace {

constexpr std::string_view kFilePrefixes[] = {
    "file:",  "image:",   "media:",   "ficheiro:", "arquivo:",
    "imagem:", "archive:", "audio:",  "video:",    "mídia:"};

constexpr std::string_view kNonArticlePrefixes[] = {
    "category:", "categoria:", "template:", "predefinição:", "wikipedia:",
    "wp:",       "help:",      "ajuda:",    "portal:",       "user:",
    "usuário:",  "utilizador:", "special:", "especial:",     "wikt:",
    "wiktionary:", "commons:", "s:",       "q:",             "n:",
    "b:",        "v:",         "anexo:",   "módulo:",        "module:",
    "mediawiki:", "draft:",    "talk:",    "discussão:"};

bool IsInterwikiPrefix(std::string_view target) {
  // Language prefixes: two or three lowercase ASCII letters, optionally with
  // a dash variant, followed by ':'.
  const size_t colon = target.find(':');
  if (colon == std::string_view::npos || colon < 2 || colon > 12) return false;
  for (size_t i = 0; i < colon; ++i) {
    const char c = target[i];
    if (!((c >= 'a' && c <= 'z') || (c == '-' && i > 1))) return false;
  }
  return colon <= 3 || target.substr(0, colon).find('-') != std::string_view::npos;
}

// Scans forward from `pos` (just past "[[") for the matching "]]", honoring
// nested "[[...]]". Returns npos when unterminated.
size_t FindLinkEnd(std::string_view text, size_t pos) {
  int depth = 1;
  while (pos + 1 < text.size()) {
    if (text[pos] == '[' && text[pos + 1] == '[') {
      ++depth;
      pos += 2;
    } else if (text[pos] == ']' && text[pos + 1] == ']') {
      if (--depth == 0) return pos;
      pos += 2;
    } else if (text[pos] == '\n' && pos + 1 < text.size() &&
               text[pos + 1] == '\n' && depth == 1) {
      // Links never span paragraphs.
      return std::string_view::npos;
    } else {
      ++pos;
    }
  }
  return std::string_view::npos;
}

}  // namespace

bool IsFileTarget(std::string_view raw_target) {
  std::string_view target = Trim(raw_target);
  for (auto prefix : kFilePrefixes) {
    if (StartsWithIgnoreCase(target, prefix)) return true;
  }
  return false;
}

std::string LinkTargetTitle(std::string_view raw_target) {
  std::string_view target = Trim(raw_target);
  const bool escaped = !target.empty() && target.front() == ':';
  if (escaped) target = Trim(target.substr(1));
  const size_t hash = target.find('#');
  if (hash != std::string_view::npos) target = target.substr(0, hash);
  target = Trim(target);
  if (target.empty()) return {};
  if (!escaped) {
    if (IsFileTarget(target)) return {};
    if (IsInterwikiPrefix(target)) return {};
  }
  for (auto prefix : kNonArticlePrefixes) {
    if (StartsWithIgnoreCase(target, prefix)) return {};
  }
  if (IsFileTarget(target)) return {};
  return NormalizeTitle(target);
}

std::vector<Interlink> ExtractInterlinks(std::string_view wikitext,
                                         size_t *malformed) {
  std::vector<Interlink> links;
  size_t bad = 0;
  size_t pos = 0;
  while (pos < wikitext.size()) {
    if (wikitext.compare(pos, 4, "<!--") == 0) {
      const size_t end = wikitext.find("-->", pos + 4);
      pos = end == std::string_view::npos ? wikitext.size() : end + 3;
      continue;
    }
    if (StartsWithIgnoreCase(wikitext.substr(pos), "<nowiki>")) {
      size_t end = wikitext.find("</nowiki>", pos + 8);
      if (end == std::string_view::npos) end = wikitext.find("</NOWIKI>", pos + 8);
      pos = end == std::string_view::npos ? wikitext.size() : end + 9;
      continue;
    }
    if (wikitext.compare(pos, 2, "[[") != 0) {
      ++pos;
      continue;
    }
    const size_t close = FindLinkEnd(wikitext, pos + 2);
    if (close == std::string_view::npos) {
      ++bad;
      pos += 2;
      continue;
    }
    const size_t inner_begin = pos + 2;
    std::string_view inner = wikitext.substr(inner_begin, close - inner_begin);
    if (inner.find("[[") != std::string_view::npos) {
      // File captions and similar containers: their nested links are the
      // interlinks, the container itself is not.
      pos = inner_begin;
      continue;
    }
    const size_t pipe = inner.find('|');
    std::string_view target = inner.substr(0, pipe);
    size_t anchor_begin = inner_begin;
    size_t anchor_end = inner_begin + target.size();
    if (pipe != std::string_view::npos) {
      anchor_begin = inner_begin + pipe + 1;
      anchor_end = close;
    }
    // Shrink the anchor to its non-blank part.
    while (anchor_begin < anchor_end &&
           std::isspace(static_cast<unsigned char>(wikitext[anchor_begin]))) {
      ++anchor_begin;
    }
    while (anchor_end > anchor_begin &&
           std::isspace(static_cast<unsigned char>(wikitext[anchor_end - 1]))) {
      --anchor_end;
    }
    if (Trim(target).empty() || anchor_end <= anchor_begin) {
      ++bad;
      pos = close + 2;
      continue;
    }
    Interlink link;
    std::string_view bare = Trim(target);
    const size_t hash = bare.find('#');
    link.target_title = std::string(Trim(bare.substr(0, hash)));
    link.span = {anchor_begin, anchor_end};
    link.anchor_text = std::string(
        wikitext.substr(anchor_begin, anchor_end - anchor_begin));
    links.push_back(std::move(link));
    pos = close + 2;
  }
  if (malformed) *malformed += bad;
  return links;
}

}  // namespace silverner

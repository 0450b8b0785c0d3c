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

#ifndef SILVERNER_WIKITEXT_CLEAN_H_
#define SILVERNER_WIKITEXT_CLEAN_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "silverner/span.h"

namespace silverner {

struct Article;

// Template-name prefixes whose templates are removed with everything nested
// inside them. Names compare case-insensitively with '_' read as a space.
class TemplateBlocklist {
 public:
  TemplateBlocklist() = default;

  // Seeded with list, table, file, domain-specific and indentation families.
  static TemplateBlocklist Default();
  static TemplateBlocklist Load(std::istream &in);
  static TemplateBlocklist LoadFile(const std::filesystem::path &path);

  void Add(std::string_view prefix);
  bool Matches(std::string_view template_name) const;

  const std::vector<std::string> &prefixes() const { return prefixes_; }

 private:
  std::vector<std::string> prefixes_;
};

// The built-in blocklist, one prefix per line (same format as a blocklist
// file).
std::string_view DefaultTemplateBlocklistText();

struct CleanCounters {
  size_t malformed = 0;
  size_t templates_removed = 0;
  size_t tables_removed = 0;
  size_t files_removed = 0;
  size_t tags_removed = 0;
  size_t indented_lines_removed = 0;
  size_t sections_removed = 0;
};

// Removes blocklisted templates, {| tables |}, file links, math/chem/gallery
// style tag regions, references and ':'-indented lines. Unbalanced markup is
// removed up to the end of the text. Idempotent.
std::string StripElements(std::string_view wikitext,
                          const TemplateBlocklist &blocklist,
                          CleanCounters *counters = nullptr);

// Drops "references", "see also", "bibliography" and "external links"
// sections (English or Portuguese titles, any case) up to the next heading of
// the same or a shallower level.
std::string FilterSections(std::string_view wikitext,
                           CleanCounters *counters = nullptr);

struct Anchor {
  std::string target_title;
  Span span;
};

struct RenderedText {
  std::string text;
  std::vector<Anchor> anchors;
};

// Resolves the remaining markup to display text. Links become their anchor
// text, headings become a paragraph of their own, templates, comments and
// tags are dropped. The result never contains "[[", "{{", "}}" or "{|".
RenderedText RenderPlain(std::string_view wikitext,
                         CleanCounters *counters = nullptr);

struct CleanArticle {
  int64_t article_id = 0;
  std::string text;
  std::vector<Anchor> anchors;
};

// StripElements, FilterSections and RenderPlain in sequence.
CleanArticle CleanWikitext(const Article &article,
                           const TemplateBlocklist &blocklist,
                           CleanCounters *counters = nullptr);

}  // namespace silverner

#endif  // SILVERNER_WIKITEXT_CLEAN_H_

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

#ifndef SILVERNER_LINKER_H_
#define SILVERNER_LINKER_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "silverner/entity_catalog.h"
#include "silverner/span.h"
#include "silverner/wiki_ingest.h"
#include "silverner/wikitext_clean.h"

namespace silverner {

struct AnchorMention {
  Span span;
  std::string entity_id;
};

// Entities an article can be tagged with: its own subject (when the article
// is about a catalog entity) and the entities its interlinks point to.
struct ArticleEntityContext {
  int64_t article_id = 0;
  std::optional<std::string> subject_entity;
  // Sorted, unique.
  std::vector<std::string> candidate_entities;
  // Ordered by span, disjoint.
  std::vector<AnchorMention> anchor_mentions;
};

// Subject lookup tries the wiki page id first and falls back to the title.
ArticleEntityContext LinkArticle(const CleanArticle &clean,
                                 const Article &article,
                                 const EntityCatalog &catalog);

}  // namespace silverner

#endif  // SILVERNER_LINKER_H_

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

#include "silverner/linker.h"

#include <algorithm>
#include <stdexcept>

namespace silverner {

ArticleEntityContext LinkArticle(const CleanArticle &clean,
                                 const Article &article,
                                 const EntityCatalog &catalog) {
  if (clean.article_id != article.article_id) {
    throw std::invalid_argument("LinkArticle: article id mismatch");
  }
  ArticleEntityContext context;
  context.article_id = article.article_id;

  const EntityRecord *subject = catalog.FindByWikiId(article.article_id);
  if (!subject) subject = catalog.FindByTitle(article.title);
  if (subject) {
    context.subject_entity = subject->entity_id;
    context.candidate_entities.push_back(subject->entity_id);
  }

  for (const auto &anchor : clean.anchors) {
    if (anchor.span.empty() || anchor.span.end > clean.text.size()) continue;
    const EntityRecord *target = catalog.FindByTitle(anchor.target_title);
    if (!target) continue;
    context.anchor_mentions.push_back({anchor.span, target->entity_id});
    context.candidate_entities.push_back(target->entity_id);
  }
  std::sort(context.anchor_mentions.begin(), context.anchor_mentions.end(),
            [](const AnchorMention &a, const AnchorMention &b) {
              return a.span < b.span;
            });

  auto &candidates = context.candidate_entities;
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());
  return context;
}

}  // namespace silverner

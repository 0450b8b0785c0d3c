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

#ifndef SILVERNER_MENTION_TAGGER_H_
#define SILVERNER_MENTION_TAGGER_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "silverner/entity_catalog.h"
#include "silverner/linker.h"
#include "silverner/span.h"

namespace silverner {

enum class Origin : uint8_t { kAnnotated, kPredicted };

// "Anot" or "Pred".
std::string_view OriginCode(Origin origin);
std::optional<Origin> ParseOriginCode(std::string_view code);

struct Mention {
  Span span;
  EntityClass cls = EntityClass::kPerson;
  Origin origin = Origin::kAnnotated;

  auto operator<=>(const Mention &) const = default;
};

// Leftmost-longest exact matching of index names against the text. A match
// must start and end on a word boundary (the neighbouring characters are not
// letters or digits). Returned mentions are Annotated, disjoint and sorted.
std::vector<Mention> MatchMentions(std::string_view text, const NameIndex &index);

// Anchor mentions of a linked article, typed with their catalog class.
std::vector<Mention> AnchorMentions(const ArticleEntityContext &context,
                                    const EntityCatalog &catalog);

// Union of exact matches and anchor mentions. An anchor wins over any exact
// match it overlaps.
std::vector<Mention> MergeAnnotated(const std::vector<Mention> &exact,
                                    const std::vector<Mention> &anchors);

// Annotated mentions plus every predicted mention that overlaps none of them.
std::vector<Mention> MergePredicted(const std::vector<Mention> &annotated,
                                    const std::vector<Mention> &predicted);

bool IsDisjointSorted(const std::vector<Mention> &mentions);

}  // namespace silverner

#endif  // SILVERNER_MENTION_TAGGER_H_

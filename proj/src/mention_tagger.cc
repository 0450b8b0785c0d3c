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

#include "silverner/mention_tagger.h"

#include <algorithm>

#include "silverner/text_util.h"

namespace silverner {

std::string_view OriginCode(Origin origin) {
  return origin == Origin::kAnnotated ? "Anot" : "Pred";
}

std::optional<Origin> ParseOriginCode(std::string_view code) {
  if (code == "Anot") return Origin::kAnnotated;
  if (code == "Pred") return Origin::kPredicted;
  return std::nullopt;
}

namespace {

bool IsBoundaryBefore(std::string_view text, size_t pos) {
  return pos == 0 || !IsWordChar(DecodeUtf8Before(text, pos));
}

bool IsBoundaryAfter(std::string_view text, size_t pos) {
  if (pos >= text.size()) return true;
  size_t length;
  return !IsWordChar(DecodeUtf8At(text, pos, &length));
}

bool IsCodePointStart(std::string_view text, size_t pos) {
  return pos >= text.size() ||
         (static_cast<unsigned char>(text[pos]) & 0xC0) != 0x80;
}

}  // namespace

std::vector<Mention> MatchMentions(std::string_view text,
                                   const NameIndex &index) {
  std::vector<Mention> mentions;
  if (index.empty()) return mentions;
  size_t pos = 0;
  while (pos < text.size()) {
    if (!IsCodePointStart(text, pos) || !IsBoundaryBefore(text, pos)) {
      ++pos;
      continue;
    }
    size_t best_end = 0;
    const NameEntry *best = nullptr;
    index.ForEachMatchAt(text, pos, [&](size_t end, const NameEntry &entry) {
      if (IsCodePointStart(text, end) && IsBoundaryAfter(text, end)) {
        best_end = end;
        best = &entry;
      }
    });
    if (best) {
      mentions.push_back({Span{pos, best_end}, best->cls, Origin::kAnnotated});
      pos = best_end;
    } else {
      ++pos;
    }
  }
  return mentions;
}

std::vector<Mention> AnchorMentions(const ArticleEntityContext &context,
                                    const EntityCatalog &catalog) {
  std::vector<Mention> mentions;
  mentions.reserve(context.anchor_mentions.size());
  for (const auto &anchor : context.anchor_mentions) {
    const EntityRecord *record = catalog.FindById(anchor.entity_id);
    if (!record) continue;
    mentions.push_back({anchor.span, record->cls, Origin::kAnnotated});
  }
  return mentions;
}

namespace {

// Keeps every `kept` mention and each `other` mention that overlaps none of
// them. Both inputs must be sorted and internally disjoint.
std::vector<Mention> UnionPreferring(const std::vector<Mention> &kept,
                                     const std::vector<Mention> &other) {
  std::vector<Mention> out;
  out.reserve(kept.size() + other.size());
  size_t k = 0;
  for (const auto &mention : other) {
    // Skip kept mentions that end before this one begins.
    while (k < kept.size() && kept[k].span.end <= mention.span.begin) ++k;
    if (k < kept.size() && kept[k].span.Overlaps(mention.span)) continue;
    out.push_back(mention);
  }
  out.insert(out.end(), kept.begin(), kept.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<Mention> MergeAnnotated(const std::vector<Mention> &exact,
                                    const std::vector<Mention> &anchors) {
  return UnionPreferring(anchors, exact);
}

std::vector<Mention> MergePredicted(const std::vector<Mention> &annotated,
                                    const std::vector<Mention> &predicted) {
  return UnionPreferring(annotated, predicted);
}

bool IsDisjointSorted(const std::vector<Mention> &mentions) {
  for (size_t i = 0; i < mentions.size(); ++i) {
    if (mentions[i].span.empty()) return false;
    if (i > 0 && mentions[i - 1].span.end > mentions[i].span.begin) return false;
  }
  return true;
}

}  // namespace silverner

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

#ifndef SILVERNER_ENTITY_CATALOG_H_
#define SILVERNER_ENTITY_CATALOG_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace silverner {

enum class EntityClass : uint8_t { kPerson, kOrganization, kLocation };

inline constexpr EntityClass kAllClasses[] = {
    EntityClass::kPerson, EntityClass::kOrganization, EntityClass::kLocation};

// "PER", "ORG" or "LOC".
std::string_view ClassCode(EntityClass cls);
std::optional<EntityClass> ParseClassCode(std::string_view code);

struct EntityRecord {
  std::string entity_id;
  EntityClass cls = EntityClass::kPerson;
  int64_t wiki_id = 0;
  std::string title;
  // Normalized, unique, non-empty. Always contains the normalized title.
  std::vector<std::string> names;
};

class CatalogError : public std::runtime_error {
 public:
  CatalogError(const std::string &what, size_t line)
      : std::runtime_error(what), line_(line) {}
  size_t line() const { return line_; }

 private:
  size_t line_;
};

struct LoadReport {
  struct Rejected {
    size_t line;
    std::string reason;
  };
  size_t records = 0;
  size_t names = 0;
  size_t ambiguous_names = 0;
  std::vector<Rejected> rejected;
  std::vector<std::string> duplicate_titles;
  std::vector<int64_t> duplicate_wiki_ids;
};

// Names are compared after NFC, whitespace collapsing and trimming. Matching
// stays case-sensitive.
std::string NormalizeName(std::string_view name);

// Page-title form used for title lookups: NFC, '_' read as space, collapsed
// whitespace, leading ':' dropped, first letter upper-cased.
std::string NormalizeTitle(std::string_view title);

// Entity records indexed by id, title and wiki page id. Immutable once built.
class EntityCatalog {
 public:
  EntityCatalog() = default;

  // Throws CatalogError on a duplicate entity id. Duplicate titles and wiki
  // ids keep the first record and are listed in the report.
  static EntityCatalog FromRecords(std::vector<EntityRecord> records,
                                   LoadReport *report = nullptr);

  // JSON Lines reader. Malformed lines are skipped and reported with their
  // line number; a duplicate id is fatal.
  static EntityCatalog Load(std::istream &in, LoadReport *report = nullptr);
  static EntityCatalog LoadFile(const std::filesystem::path &path,
                                LoadReport *report = nullptr);

  const std::vector<EntityRecord> &records() const { return records_; }
  size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  const EntityRecord *FindById(std::string_view entity_id) const;
  const EntityRecord *FindByTitle(std::string_view title) const;
  const EntityRecord *FindByWikiId(int64_t wiki_id) const;

  // Names carried by entities of more than one class.
  const std::set<std::string> &ambiguous_names() const {
    return ambiguous_names_;
  }
  bool IsAmbiguous(const std::string &normalized_name) const {
    return ambiguous_names_.count(normalized_name) > 0;
  }

 private:
  std::vector<EntityRecord> records_;
  std::unordered_map<std::string, size_t> by_id_;
  std::unordered_map<std::string, size_t> by_title_;
  std::unordered_map<int64_t, size_t> by_wiki_id_;
  std::set<std::string> ambiguous_names_;
};

struct NameEntry {
  std::string name;
  std::string entity_id;
  EntityClass cls;
};

// Byte trie over normalized names. Every name maps to exactly one class.
class NameIndex {
 public:
  NameIndex() : nodes_(1) {}

  // Returns false and leaves the index untouched when the name is already
  // present or empty.
  bool Add(std::string_view name, std::string_view entity_id,
           EntityClass cls);

  const NameEntry *Find(std::string_view name) const;

  // Calls visit(end, entry) for each indexed name equal to text[pos, end),
  // in increasing order of end.
  template <typename Visit>
  void ForEachMatchAt(std::string_view text, size_t pos, Visit &&visit) const;

  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<NameEntry> &entries() const { return entries_; }

 private:
  struct Node {
    std::vector<std::pair<unsigned char, uint32_t>> children;
    int32_t entry = -1;
  };

  int64_t Child(uint32_t node, unsigned char byte) const;

  std::vector<Node> nodes_;
  std::vector<NameEntry> entries_;
};

// Index over all non-ambiguous names of the catalog.
NameIndex BuildNameIndex(const EntityCatalog &catalog);

// Index restricted to the listed entities. Throws std::invalid_argument for
// an id that is not in the catalog.
NameIndex BuildNameIndex(const EntityCatalog &catalog,
                         std::span<const std::string> restrict_to);

template <typename Visit>
void NameIndex::ForEachMatchAt(std::string_view text, size_t pos,
                               Visit &&visit) const {
  uint32_t node = 0;
  for (size_t i = pos; i < text.size(); ++i) {
    const int64_t next = Child(node, static_cast<unsigned char>(text[i]));
    if (next < 0) return;
    node = static_cast<uint32_t>(next);
    if (nodes_[node].entry >= 0) visit(i + 1, entries_[nodes_[node].entry]);
  }
}

}  // namespace silverner

#endif  // SILVERNER_ENTITY_CATALOG_H_

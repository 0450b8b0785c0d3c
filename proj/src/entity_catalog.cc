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

#include "silverner/entity_catalog.h"

#include <unicode/uchar.h>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>

#include "json.hpp"
#include "silverner/text_util.h"

namespace silverner {

std::string_view ClassCode(EntityClass cls) {
  switch (cls) {
    case EntityClass::kPerson:
      return "PER";
    case EntityClass::kOrganization:
      return "ORG";
    case EntityClass::kLocation:
      return "LOC";
  }
  return "";
}

std::optional<EntityClass> ParseClassCode(std::string_view code) {
  if (code == "PER") return EntityClass::kPerson;
  if (code == "ORG") return EntityClass::kOrganization;
  if (code == "LOC") return EntityClass::kLocation;
  return std::nullopt;
}

std::string NormalizeName(std::string_view name) {
  return CollapseWhitespace(NormalizeNfc(name));
}

std::string NormalizeTitle(std::string_view title) {
  std::string spaced(title);
  std::replace(spaced.begin(), spaced.end(), '_', ' ');
  std::string collapsed = CollapseWhitespace(NormalizeNfc(spaced));
  std::string_view view = collapsed;
  while (!view.empty() && view.front() == ':') view.remove_prefix(1);
  view = Trim(view);
  if (view.empty()) return {};
  size_t length;
  const char32_t first = DecodeUtf8At(view, 0, &length);
  std::string out;
  AppendUtf8(&out, static_cast<char32_t>(u_toupper(static_cast<UChar32>(first))));
  out.append(view.substr(length));
  return out;
}

EntityCatalog EntityCatalog::FromRecords(std::vector<EntityRecord> records,
                                         LoadReport *report) {
  LoadReport local;
  LoadReport &rep = report ? *report : local;
  EntityCatalog catalog;
  catalog.records_.reserve(records.size());
  std::map<std::string, std::set<EntityClass>> classes_by_name;

  for (auto &record : records) {
    if (catalog.by_id_.count(record.entity_id)) {
      throw CatalogError("duplicate entity id '" + record.entity_id + "'", 0);
    }
    std::vector<std::string> names;
    auto add_name = [&](std::string_view raw) {
      std::string name = NormalizeName(raw);
      if (!name.empty() &&
          std::find(names.begin(), names.end(), name) == names.end()) {
        names.push_back(std::move(name));
      }
    };
    add_name(record.title);
    for (const auto &name : record.names) add_name(name);
    record.names = std::move(names);
    for (const auto &name : record.names) {
      classes_by_name[name].insert(record.cls);
    }

    const size_t slot = catalog.records_.size();
    catalog.by_id_.emplace(record.entity_id, slot);
    const std::string title = NormalizeTitle(record.title);
    if (!catalog.by_title_.emplace(title, slot).second) {
      rep.duplicate_titles.push_back(title);
      std::cerr << "catalog: duplicate title '" << title << "' ("
                << record.entity_id << "), keeping first\n";
    }
    if (!catalog.by_wiki_id_.emplace(record.wiki_id, slot).second) {
      rep.duplicate_wiki_ids.push_back(record.wiki_id);
    }
    catalog.records_.push_back(std::move(record));
  }

  for (const auto &[name, classes] : classes_by_name) {
    if (classes.size() > 1) catalog.ambiguous_names_.insert(name);
  }
  rep.records = catalog.records_.size();
  rep.names = classes_by_name.size();
  rep.ambiguous_names = catalog.ambiguous_names_.size();
  return catalog;
}

namespace {

std::optional<EntityRecord> ParseRecord(std::string_view line,
                                        std::string *reason) {
  const auto json = nlohmann::json::parse(line, nullptr, false);
  if (json.is_discarded() || !json.is_object()) {
    *reason = "not a JSON object";
    return std::nullopt;
  }
  EntityRecord record;
  auto id = json.find("id");
  if (id == json.end() || !id->is_string() ||
      id->get_ref<const std::string &>().empty()) {
    *reason = "missing or empty \"id\"";
    return std::nullopt;
  }
  record.entity_id = id->get<std::string>();

  auto cls = json.find("class");
  if (cls == json.end() || !cls->is_string()) {
    *reason = "missing \"class\"";
    return std::nullopt;
  }
  auto parsed = ParseClassCode(cls->get_ref<const std::string &>());
  if (!parsed) {
    *reason = "unknown class '" + cls->get<std::string>() + "'";
    return std::nullopt;
  }
  record.cls = *parsed;

  auto wiki_id = json.find("wiki_id");
  if (wiki_id == json.end() || !wiki_id->is_number_integer() ||
      wiki_id->get<int64_t>() < 0) {
    *reason = "missing or negative \"wiki_id\"";
    return std::nullopt;
  }
  record.wiki_id = wiki_id->get<int64_t>();

  auto title = json.find("title");
  if (title == json.end() || !title->is_string() ||
      NormalizeTitle(title->get_ref<const std::string &>()).empty()) {
    *reason = "missing or empty \"title\"";
    return std::nullopt;
  }
  record.title = title->get<std::string>();

  auto names = json.find("names");
  if (names == json.end() || !names->is_array()) {
    *reason = "missing \"names\" array";
    return std::nullopt;
  }
  for (const auto &name : *names) {
    if (!name.is_string()) {
      *reason = "non-string entry in \"names\"";
      return std::nullopt;
    }
    record.names.push_back(name.get<std::string>());
  }
  return record;
}

}  // namespace

EntityCatalog EntityCatalog::Load(std::istream &in, LoadReport *report) {
  LoadReport local;
  LoadReport &rep = report ? *report : local;
  std::vector<EntityRecord> records;
  std::unordered_map<std::string, size_t> first_line;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::string_view view = Trim(line);
    if (view.empty() || view.front() == '#') continue;
    std::string reason;
    auto record = ParseRecord(view, &reason);
    if (!record) {
      rep.rejected.push_back({line_number, reason});
      continue;
    }
    auto [it, inserted] = first_line.emplace(record->entity_id, line_number);
    if (!inserted) {
      throw CatalogError("duplicate entity id '" + record->entity_id +
                             "' (first seen on line " +
                             std::to_string(it->second) + ")",
                         line_number);
    }
    records.push_back(std::move(*record));
  }
  return FromRecords(std::move(records), &rep);
}

EntityCatalog EntityCatalog::LoadFile(const std::filesystem::path &path,
                                      LoadReport *report) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open catalog " + path.string());
  return Load(in, report);
}

const EntityRecord *EntityCatalog::FindById(std::string_view entity_id) const {
  auto it = by_id_.find(std::string(entity_id));
  return it == by_id_.end() ? nullptr : &records_[it->second];
}

const EntityRecord *EntityCatalog::FindByTitle(std::string_view title) const {
  auto it = by_title_.find(NormalizeTitle(title));
  return it == by_title_.end() ? nullptr : &records_[it->second];
}

const EntityRecord *EntityCatalog::FindByWikiId(int64_t wiki_id) const {
  auto it = by_wiki_id_.find(wiki_id);
  return it == by_wiki_id_.end() ? nullptr : &records_[it->second];
}

int64_t NameIndex::Child(uint32_t node, unsigned char byte) const {
  const auto &children = nodes_[node].children;
  auto it = std::lower_bound(
      children.begin(), children.end(), byte,
      [](const auto &edge, unsigned char b) { return edge.first < b; });
  if (it == children.end() || it->first != byte) return -1;
  return it->second;
}

bool NameIndex::Add(std::string_view name, std::string_view entity_id,
                    EntityClass cls) {
  if (name.empty()) return false;
  uint32_t node = 0;
  for (char c : name) {
    const auto byte = static_cast<unsigned char>(c);
    const int64_t next = Child(node, byte);
    if (next >= 0) {
      node = static_cast<uint32_t>(next);
      continue;
    }
    const auto created = static_cast<uint32_t>(nodes_.size());
    nodes_.emplace_back();
    auto &children = nodes_[node].children;
    auto it = std::lower_bound(
        children.begin(), children.end(), byte,
        [](const auto &edge, unsigned char b) { return edge.first < b; });
    children.insert(it, {byte, created});
    node = created;
  }
  if (nodes_[node].entry >= 0) return false;
  nodes_[node].entry = static_cast<int32_t>(entries_.size());
  entries_.push_back({std::string(name), std::string(entity_id), cls});
  return true;
}

const NameEntry *NameIndex::Find(std::string_view name) const {
  const NameEntry *found = nullptr;
  ForEachMatchAt(name, 0, [&](size_t end, const NameEntry &entry) {
    if (end == name.size()) found = &entry;
  });
  return found;
}

namespace {

void AddRecordNames(const EntityCatalog &catalog, const EntityRecord &record,
                    NameIndex *index) {
  for (const auto &name : record.names) {
    if (!catalog.IsAmbiguous(name)) index->Add(name, record.entity_id, record.cls);
  }
}

}  // namespace

NameIndex BuildNameIndex(const EntityCatalog &catalog) {
  NameIndex index;
  for (const auto &record : catalog.records()) {
    AddRecordNames(catalog, record, &index);
  }
  return index;
}

NameIndex BuildNameIndex(const EntityCatalog &catalog,
                         std::span<const std::string> restrict_to) {
  std::vector<const EntityRecord *> selected;
  selected.reserve(restrict_to.size());
  for (const auto &id : restrict_to) {
    const EntityRecord *record = catalog.FindById(id);
    if (!record) throw std::invalid_argument("unknown entity id '" + id + "'");
    selected.push_back(record);
  }
  // Catalog order keeps the winner of same-class name collisions stable.
  std::sort(selected.begin(), selected.end());
  selected.erase(std::unique(selected.begin(), selected.end()), selected.end());
  NameIndex index;
  for (const EntityRecord *record : selected) {
    AddRecordNames(catalog, *record, &index);
  }
  return index;
}

}  // namespace silverner

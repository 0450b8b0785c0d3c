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

#ifndef SILVERNER_PIPELINE_H_
#define SILVERNER_PIPELINE_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "silverner/aux_tagger.h"
#include "silverner/corpus.h"
#include "silverner/entity_catalog.h"
#include "silverner/stats.h"
#include "silverner/tokenizer.h"
#include "silverner/wiki_ingest.h"
#include "silverner/wikitext_clean.h"

namespace silverner {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PipelineConfig {
  std::filesystem::path dump;
  std::filesystem::path catalog;
  std::filesystem::path out;
  int workers = 1;
  // Shell command of the auxiliary tagger; empty disables it.
  std::string aux_cmd;
  int aux_timeout_ms = 30000;
  bool with_origin = false;
  // Empty paths select the built-in lists.
  std::filesystem::path blocklist;
  std::filesystem::path abbrev;
  bool global_match = false;

  // Throws ConfigError for a bad worker count or an unreadable input.
  void Validate() const;

  // Effective configuration, as written next to the corpus.
  std::string ManifestJson() const;

  // Reads a JSON config file. Keys mirror the long flag names with '_' for
  // '-' ("aux_cmd", "with_origin", ...). Throws ConfigError.
  static PipelineConfig FromJsonFile(const std::filesystem::path &path);
};

// Per-article stage counters; summed across the run.
struct StageCounters {
  size_t articles = 0;
  size_t quarantined = 0;
  size_t clean_malformed = 0;
  size_t anchor_mentions = 0;
  size_t exact_mentions = 0;
  size_t exact_overridden = 0;
  size_t predicted_mentions = 0;
  size_t predicted_discarded = 0;
  size_t aux_failures = 0;
  size_t aux_dropped_invalid = 0;
  size_t sentences = 0;
  size_t sentence_merges = 0;
  size_t sentences_kept = 0;
  size_t tokens_kept = 0;

  void Merge(const StageCounters &other);
};

struct ArticleOutput {
  std::vector<TaggedSentence> sentences;  // filtered to annotated by default
  StageCounters counters;
};

// clean -> link -> match -> (aux) -> merge -> tokenize -> repair -> project
// -> filter for a single article. Stateless; safe to share across threads.
class ArticleProcessor {
 public:
  // `global_index` switches exact matching from the article's candidate
  // entities to the whole catalog.
  ArticleProcessor(const EntityCatalog &catalog,
                   const TemplateBlocklist &blocklist,
                   const Tokenizer &tokenizer,
                   const NameIndex *global_index = nullptr)
      : catalog_(catalog),
        blocklist_(blocklist),
        tokenizer_(tokenizer),
        global_index_(global_index) {}

  ArticleOutput Process(const Article &article, AuxTagger *aux) const;

  // Keeps sentences without Annotated tokens (for inspection; the corpus
  // build always filters them).
  void set_keep_unannotated(bool keep) { keep_unannotated_ = keep; }

 private:
  const EntityCatalog &catalog_;
  const TemplateBlocklist &blocklist_;
  const Tokenizer &tokenizer_;
  const NameIndex *global_index_;
  bool keep_unannotated_ = false;
};

struct BuildResult {
  DumpCounters dump;
  StageCounters stages;
  CorpusStats stats;
  uint64_t bytes_written = 0;
  size_t aux_restarts = 0;
  size_t aux_incidents = 0;
};

// Sidecar files written next to the corpus.
std::filesystem::path StatsPath(const std::filesystem::path &out);
std::filesystem::path ProvenancePath(const std::filesystem::path &out);
std::filesystem::path ManifestPath(const std::filesystem::path &out);

// Runs the whole build: one reader, `workers` article workers, one ordered
// writer. Output is byte-identical for any worker count. Throws ConfigError,
// DumpError or std::runtime_error on fatal errors; failing articles are
// quarantined and counted instead.
BuildResult RunBuild(const PipelineConfig &config);

// Same, with a caller-supplied tokenizer instead of the rule tokenizer built
// from config.abbrev.
BuildResult RunBuild(const PipelineConfig &config, const Tokenizer &tokenizer);

}  // namespace silverner

#endif  // SILVERNER_PIPELINE_H_

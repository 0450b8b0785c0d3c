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

#include "silverner/pipeline.h"

#include <zlib.h>

#include <algorithm>
#include <condition_variable>
#include <deque>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "silverner/linker.h"
#include "silverner/mention_tagger.h"
#include "silverner/version.h"

namespace silverner {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void RequireReadable(const fs::path &path, const char *what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(std::string(what) + " not readable: " + path.string());
}

// Byte size and CRC32 of a file, used as its provenance identifier.
std::pair<uint64_t, uint32_t> FileChecksum(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::vector<char> buffer(1 << 20);
  uint64_t bytes = 0;
  uLong crc = crc32(0L, Z_NULL, 0);
  while (in) {
    in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    const auto got = static_cast<size_t>(in.gcount());
    if (got == 0) break;
    crc = crc32(crc, reinterpret_cast<const Bytef *>(buffer.data()),
                static_cast<uInt>(got));
    bytes += got;
  }
  return {bytes, static_cast<uint32_t>(crc)};
}

// Mentions intersecting [begin, end) of a sorted disjoint list.
std::vector<Mention> MentionsIn(const std::vector<Mention> &mentions,
                                Span range) {
  auto it = std::lower_bound(
      mentions.begin(), mentions.end(), range.begin,
      [](const Mention &m, size_t pos) { return m.span.end <= pos; });
  std::vector<Mention> out;
  for (; it != mentions.end() && it->span.begin < range.end; ++it) {
    out.push_back(*it);
  }
  return out;
}

}  // namespace

void PipelineConfig::Validate() const {
  if (workers < 1) throw ConfigError("workers must be at least 1");
  if (aux_timeout_ms < 1) throw ConfigError("aux timeout must be positive");
  if (dump.empty()) throw ConfigError("missing dump path");
  if (catalog.empty()) throw ConfigError("missing catalog path");
  if (out.empty()) throw ConfigError("missing output path");
  RequireReadable(dump, "dump");
  RequireReadable(catalog, "catalog");
  if (!blocklist.empty()) RequireReadable(blocklist, "blocklist");
  if (!abbrev.empty()) RequireReadable(abbrev, "abbreviation list");
  const fs::path parent = out.has_parent_path() ? out.parent_path() : ".";
  if (!fs::is_directory(parent)) {
    throw ConfigError("output directory does not exist: " + parent.string());
  }
}

std::string PipelineConfig::ManifestJson() const {
  ordered_json j;
  j["tool_version"] = kVersion;
  j["dump"] = dump.string();
  j["catalog"] = catalog.string();
  j["out"] = out.string();
  j["workers"] = workers;
  j["aux_cmd"] = aux_cmd;
  j["aux_timeout_ms"] = aux_timeout_ms;
  j["with_origin"] = with_origin;
  j["blocklist"] = blocklist.string();
  j["abbrev"] = abbrev.string();
  j["global_match"] = global_match;
  return j.dump(2) + "\n";
}

PipelineConfig PipelineConfig::FromJsonFile(const fs::path &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw ConfigError("config is not a JSON object: " + path.string());
  }
  PipelineConfig config;
  try {
    for (const auto &[key, value] : j.items()) {
      if (key == "dump") config.dump = value.get<std::string>();
      else if (key == "catalog") config.catalog = value.get<std::string>();
      else if (key == "out") config.out = value.get<std::string>();
      else if (key == "workers") config.workers = value.get<int>();
      else if (key == "aux_cmd") config.aux_cmd = value.get<std::string>();
      else if (key == "aux_timeout_ms") config.aux_timeout_ms = value.get<int>();
      else if (key == "with_origin") config.with_origin = value.get<bool>();
      else if (key == "blocklist") config.blocklist = value.get<std::string>();
      else if (key == "abbrev") config.abbrev = value.get<std::string>();
      else if (key == "global_match") config.global_match = value.get<bool>();
      else if (key == "tool_version") continue;
      else throw ConfigError("unknown config key: " + key);
    }
  } catch (const json::exception &e) {
    throw ConfigError("bad config value in " + path.string() + ": " + e.what());
  }
  return config;
}

void StageCounters::Merge(const StageCounters &o) {
  articles += o.articles;
  quarantined += o.quarantined;
  clean_malformed += o.clean_malformed;
  anchor_mentions += o.anchor_mentions;
  exact_mentions += o.exact_mentions;
  exact_overridden += o.exact_overridden;
  predicted_mentions += o.predicted_mentions;
  predicted_discarded += o.predicted_discarded;
  aux_failures += o.aux_failures;
  aux_dropped_invalid += o.aux_dropped_invalid;
  sentences += o.sentences;
  sentence_merges += o.sentence_merges;
  sentences_kept += o.sentences_kept;
  tokens_kept += o.tokens_kept;
}

ArticleOutput ArticleProcessor::Process(const Article &article,
                                        AuxTagger *aux) const {
  ArticleOutput out;
  StageCounters &c = out.counters;
  c.articles = 1;

  CleanCounters clean_counters;
  const CleanArticle clean = CleanWikitext(article, blocklist_, &clean_counters);
  c.clean_malformed = clean_counters.malformed;
  const std::string &text = clean.text;

  const ArticleEntityContext context = LinkArticle(clean, article, catalog_);
  std::vector<Mention> exact;
  if (global_index_) {
    exact = MatchMentions(text, *global_index_);
  } else if (!context.candidate_entities.empty()) {
    const NameIndex local = BuildNameIndex(catalog_, context.candidate_entities);
    exact = MatchMentions(text, local);
  }
  const std::vector<Mention> anchors = AnchorMentions(context, catalog_);
  std::vector<Mention> mentions = MergeAnnotated(exact, anchors);
  c.anchor_mentions = anchors.size();
  c.exact_mentions = exact.size();
  c.exact_overridden = exact.size() + anchors.size() - mentions.size();

  if (aux) {
    AuxCounters aux_counters;
    const std::vector<Mention> predicted = RunAuxTagger(text, *aux, &aux_counters);
    const size_t before = mentions.size();
    mentions = MergePredicted(mentions, predicted);
    c.predicted_mentions = mentions.size() - before;
    c.predicted_discarded = predicted.size() - c.predicted_mentions;
    c.aux_failures = aux_counters.failures;
    c.aux_dropped_invalid = aux_counters.dropped_invalid;
  }

  std::vector<SentenceSpan> sentences = tokenizer_.SplitSentences(text);
  c.sentences = sentences.size();
  sentences = RepairCrossSentence(std::move(sentences), mentions);
  c.sentence_merges = c.sentences - sentences.size();

  for (SentenceSpan &sentence : sentences) {
    const std::vector<Mention> local = MentionsIn(mentions, sentence.span);
    sentence = tokenizer_.SplitWords(std::move(sentence), text);
    if (!local.empty()) sentence.tokens = RepairSubword(sentence.tokens, local);
    TaggedSentence tagged = ProjectBio(sentence, local);
    if (!keep_unannotated_ && !HasAnnotatedToken(tagged)) continue;
    c.tokens_kept += tagged.tokens.size();
    out.sentences.push_back(std::move(tagged));
  }
  c.sentences_kept = out.sentences.size();
  return out;
}

fs::path StatsPath(const fs::path &out) { return out.string() + ".stats.json"; }
fs::path ProvenancePath(const fs::path &out) {
  return out.string() + ".provenance.json";
}
fs::path ManifestPath(const fs::path &out) {
  return out.string() + ".manifest.json";
}

namespace {

// Articles flow reader -> workers -> ordered writer. At most `window`
// articles are between the reader and the writer at any time.
class BuildRun {
 public:
  BuildRun(const PipelineConfig &config, const ArticleProcessor &processor,
           std::ostream &sink)
      : config_(config),
        processor_(processor),
        sink_(sink),
        window_(static_cast<uint64_t>(config.workers) * 4),
        budget_(3) {}

  void Run(DumpReader &reader) {
    std::vector<std::thread> workers;
    for (int i = 0; i < config_.workers; ++i) {
      workers.emplace_back([this] { WorkerLoop(); });
    }
    std::thread writer([this] { WriterLoop(); });

    try {
      Article article;
      uint64_t seq = 0;
      while (reader.Next(&article)) {
        std::unique_lock<std::mutex> lock(mu_);
        space_cv_.wait(lock, [&] { return abort_ || seq - written_ < window_; });
        if (abort_) break;
        work_.push_back({seq++, std::move(article)});
        work_cv_.notify_one();
      }
      std::lock_guard<std::mutex> lock(mu_);
      total_ = seq;
      input_done_ = true;
    } catch (...) {
      Fail(std::current_exception());
    }
    work_cv_.notify_all();
    done_cv_.notify_all();
    for (auto &t : workers) t.join();
    writer.join();
    if (error_) std::rethrow_exception(error_);
  }

  const StageCounters &counters() const { return counters_; }
  const StatsAccumulator &stats() const { return stats_; }
  uint64_t bytes_written() const { return bytes_; }
  size_t aux_restarts() const { return aux_restarts_; }
  size_t aux_incidents() const { return aux_incidents_; }

 private:
  struct Job {
    uint64_t seq;
    Article article;
  };

  void Fail(std::exception_ptr error) {
    std::lock_guard<std::mutex> lock(mu_);
    if (!error_) error_ = error;
    abort_ = true;
    work_cv_.notify_all();
    done_cv_.notify_all();
    space_cv_.notify_all();
  }

  void WorkerLoop() {
    std::unique_ptr<SubprocessAuxTagger> aux;
    if (!config_.aux_cmd.empty()) {
      aux = std::make_unique<SubprocessAuxTagger>(
          config_.aux_cmd, &budget_,
          std::chrono::milliseconds(config_.aux_timeout_ms));
    }
    for (;;) {
      Job job;
      {
        std::unique_lock<std::mutex> lock(mu_);
        work_cv_.wait(lock,
                      [&] { return abort_ || input_done_ || !work_.empty(); });
        if (abort_) break;
        if (work_.empty()) break;
        job = std::move(work_.front());
        work_.pop_front();
      }
      ArticleOutput output;
      try {
        output = processor_.Process(job.article, aux.get());
      } catch (const std::exception &e) {
        std::cerr << "silverner: quarantined article " << job.article.article_id
                  << " (" << job.article.title << "): " << e.what() << "\n";
        output = ArticleOutput{};
        output.counters.articles = 1;
        output.counters.quarantined = 1;
      }
      std::lock_guard<std::mutex> lock(mu_);
      done_.emplace(job.seq, std::move(output));
      done_cv_.notify_all();
    }
    if (aux) {
      std::lock_guard<std::mutex> lock(mu_);
      aux_restarts_ += aux->restarts();
      aux_incidents_ += aux->incidents();
    }
  }

  void WriterLoop() {
    try {
      for (;;) {
        ArticleOutput output;
        {
          std::unique_lock<std::mutex> lock(mu_);
          done_cv_.wait(lock, [&] {
            return abort_ || done_.count(written_) ||
                   (input_done_ && written_ == total_);
          });
          if (abort_) return;
          auto it = done_.find(written_);
          if (it == done_.end()) return;
          output = std::move(it->second);
          done_.erase(it);
        }
        for (const TaggedSentence &sentence : output.sentences) {
          bytes_ += WriteSentence(sentence, sink_, config_.with_origin);
          stats_.Add(sentence);
        }
        counters_.Merge(output.counters);
        std::lock_guard<std::mutex> lock(mu_);
        ++written_;
        space_cv_.notify_all();
        done_cv_.notify_all();
      }
    } catch (...) {
      Fail(std::current_exception());
    }
  }

  const PipelineConfig &config_;
  const ArticleProcessor &processor_;
  std::ostream &sink_;
  const uint64_t window_;
  RestartBudget budget_;

  std::mutex mu_;
  std::condition_variable work_cv_;
  std::condition_variable done_cv_;
  std::condition_variable space_cv_;
  std::deque<Job> work_;
  std::map<uint64_t, ArticleOutput> done_;
  uint64_t written_ = 0;
  uint64_t total_ = 0;
  bool input_done_ = false;
  bool abort_ = false;
  std::exception_ptr error_;

  // Writer-owned.
  StageCounters counters_;
  StatsAccumulator stats_;
  uint64_t bytes_ = 0;
  size_t aux_restarts_ = 0;
  size_t aux_incidents_ = 0;
};

void WriteTextFile(const fs::path &path, const std::string &contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << contents;
  out.flush();
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

void LogCounters(const BuildResult &r) {
  const StageCounters &s = r.stages;
  std::cerr << "silverner: ingest pages=" << r.dump.pages
            << " articles=" << r.dump.articles
            << " redirects_skipped=" << r.dump.redirects_skipped
            << " namespace_skipped=" << r.dump.namespace_skipped << "\n"
            << "silverner: clean malformed=" << s.clean_malformed << "\n"
            << "silverner: mentions anchor=" << s.anchor_mentions
            << " exact=" << s.exact_mentions
            << " exact_overridden=" << s.exact_overridden
            << " predicted=" << s.predicted_mentions
            << " predicted_discarded=" << s.predicted_discarded << "\n"
            << "silverner: aux failures=" << s.aux_failures
            << " dropped_invalid=" << s.aux_dropped_invalid
            << " restarts=" << r.aux_restarts
            << " incidents=" << r.aux_incidents << "\n"
            << "silverner: sentences split=" << s.sentences
            << " merged=" << s.sentence_merges << " kept=" << s.sentences_kept
            << " tokens=" << s.tokens_kept << "\n"
            << "silverner: articles processed=" << s.articles - s.quarantined
            << " quarantined=" << s.quarantined << "\n";
}

}  // namespace

BuildResult RunBuild(const PipelineConfig &config) {
  config.Validate();
  const RuleTokenizer tokenizer(config.abbrev.empty()
                                    ? AbbreviationList::Default()
                                    : AbbreviationList::LoadFile(config.abbrev));
  return RunBuild(config, tokenizer);
}

BuildResult RunBuild(const PipelineConfig &config, const Tokenizer &tokenizer) {
  config.Validate();

  const EntityCatalog catalog = EntityCatalog::LoadFile(config.catalog);
  const TemplateBlocklist blocklist =
      config.blocklist.empty() ? TemplateBlocklist::Default()
                               : TemplateBlocklist::LoadFile(config.blocklist);
  std::unique_ptr<NameIndex> global_index;
  if (config.global_match) {
    global_index = std::make_unique<NameIndex>(BuildNameIndex(catalog));
  }
  const ArticleProcessor processor(catalog, blocklist, tokenizer,
                                   global_index.get());

  std::ofstream sink(config.out, std::ios::binary | std::ios::trunc);
  if (!sink) throw ConfigError("cannot open output " + config.out.string());
  std::vector<char> sink_buffer(1 << 20);
  sink.rdbuf()->pubsetbuf(sink_buffer.data(),
                          static_cast<std::streamsize>(sink_buffer.size()));

  DumpReader reader(config.dump);
  BuildRun run(config, processor, sink);
  run.Run(reader);
  sink.flush();
  if (!sink) throw std::runtime_error("write failed: " + config.out.string());

  BuildResult result;
  result.dump = reader.counters();
  result.stages = run.counters();
  result.stats = run.stats().Finish();
  result.bytes_written = run.bytes_written();
  result.aux_restarts = run.aux_restarts();
  result.aux_incidents = run.aux_incidents();
  if (result.stages.articles != result.dump.articles) {
    throw std::logic_error("article accounting mismatch");
  }

  Provenance provenance;
  provenance.dump = config.dump.string();
  provenance.dump_bytes = reader.raw_bytes();
  provenance.dump_crc32 = reader.raw_crc32();
  provenance.catalog = config.catalog.string();
  std::tie(provenance.catalog_bytes, provenance.catalog_crc32) =
      FileChecksum(config.catalog);
  provenance.tool_version = kVersion;

  WriteTextFile(StatsPath(config.out),
                RenderReport(result.stats, ReportFormat::kJson));
  WriteTextFile(ProvenancePath(config.out), ProvenanceJson(provenance));
  WriteTextFile(ManifestPath(config.out), config.ManifestJson());
  LogCounters(result);
  return result;
}

}  // namespace silverner

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

// Command-line front end: build, stats, score and inspect.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "silverner/corpus.h"
#include "silverner/pipeline.h"
#include "silverner/scorer.h"
#include "silverner/stats.h"
#include "silverner/version.h"

namespace {

using namespace silverner;

constexpr int kExitOk = 0;
constexpr int kExitFatal = 1;
constexpr int kExitValidation = 2;

Corpus ReadCorpusFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  return ReadCorpus(in);
}

// Parses "a:b" into a half-open sentence range; either side may be empty.
bool ParseRange(const std::string &text, size_t *begin, size_t *end) {
  const size_t colon = text.find(':');
  if (colon == std::string::npos) return false;
  try {
    const std::string left = text.substr(0, colon);
    const std::string right = text.substr(colon + 1);
    *begin = left.empty() ? 0 : std::stoull(left);
    *end = right.empty() ? static_cast<size_t>(-1) : std::stoull(right);
  } catch (const std::exception &) {
    return false;
  }
  return *begin <= *end;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Silver-standard NER corpus builder"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string format = "text";
  auto add_format = [&](CLI::App *cmd) {
    cmd->add_option("--format", format, "Report format")
        ->check(CLI::IsMember({"json", "text"}));
  };

  PipelineConfig flags;
  std::string config_path;
  std::string dump, catalog, out, blocklist, abbrev;
  CLI::App *build = app.add_subcommand("build", "Build a corpus from a dump");
  build->add_option("--config", config_path, "JSON config file; flags win")
      ->check(CLI::ExistingFile);
  auto *dump_opt = build->add_option("--dump", dump, "Wikipedia XML dump (.xml or .gz)");
  auto *catalog_opt = build->add_option("--catalog", catalog, "Entity catalog (JSON Lines)");
  auto *out_opt = build->add_option("--out", out, "Corpus output path");
  auto *workers_opt = build->add_option("--workers", flags.workers, "Article workers");
  auto *aux_opt = build->add_option("--aux-cmd", flags.aux_cmd,
                                    "Auxiliary tagger command line");
  auto *timeout_opt = build->add_option("--aux-timeout-ms", flags.aux_timeout_ms,
                                        "Per-request aux tagger timeout");
  auto *origin_opt = build->add_flag("--with-origin", flags.with_origin,
                                     "Write the Anot/Pred origin column");
  auto *blocklist_opt = build->add_option("--blocklist", blocklist,
                                          "Template blocklist file");
  auto *abbrev_opt = build->add_option("--abbrev", abbrev, "Abbreviation list file");
  auto *global_opt = build->add_flag("--global-match", flags.global_match,
                                     "Match names from the whole catalog");
  add_format(build);

  std::string corpus_path;
  CLI::App *stats = app.add_subcommand("stats", "Report corpus statistics");
  stats->add_option("corpus", corpus_path, "Corpus file")->required();
  add_format(stats);

  std::string gold_path, pred_path, mode = "strict";
  CLI::App *score = app.add_subcommand("score", "Score a corpus against gold");
  score->add_option("gold", gold_path, "Gold corpus")->required();
  score->add_option("pred", pred_path, "Predicted corpus")->required();
  score->add_option("--mode", mode, "Match mode")
      ->check(CLI::IsMember({"strict", "partial"}));
  add_format(score);

  std::string range = "0:10";
  CLI::App *inspect = app.add_subcommand("inspect", "Print corpus sentences");
  inspect->add_option("corpus", corpus_path, "Corpus file")->required();
  inspect->add_option("--range", range, "Sentence range a:b (half-open)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitFatal;
  }
  const ReportFormat report_format =
      format == "json" ? ReportFormat::kJson : ReportFormat::kText;

  try {
    if (*build) {
      PipelineConfig config;
      if (!config_path.empty()) config = PipelineConfig::FromJsonFile(config_path);
      if (*dump_opt) config.dump = dump;
      if (*catalog_opt) config.catalog = catalog;
      if (*out_opt) config.out = out;
      if (*workers_opt) config.workers = flags.workers;
      if (*aux_opt) config.aux_cmd = flags.aux_cmd;
      if (*timeout_opt) config.aux_timeout_ms = flags.aux_timeout_ms;
      if (*origin_opt) config.with_origin = flags.with_origin;
      if (*blocklist_opt) config.blocklist = blocklist;
      if (*abbrev_opt) config.abbrev = abbrev;
      if (*global_opt) config.global_match = flags.global_match;
      const BuildResult result = RunBuild(config);
      std::cout << RenderReport(result.stats, report_format);
      return kExitOk;
    }
    if (*stats) {
      std::cout << RenderReport(ComputeStats(ReadCorpusFile(corpus_path)),
                                report_format);
      return kExitOk;
    }
    if (*score) {
      const ScoreMode score_mode =
          mode == "strict" ? ScoreMode::kStrict : ScoreMode::kPartial;
      const Corpus gold = ReadCorpusFile(gold_path);
      const Corpus pred = ReadCorpusFile(pred_path);
      try {
        const Score result = ScoreCorpora(gold, pred, score_mode);
        std::cout << (report_format == ReportFormat::kJson
                          ? ScoreJson(result, score_mode)
                          : ScoreText(result, score_mode));
      } catch (const TokenMismatchError &e) {
        std::cerr << "silverner: tokenization mismatch at sentence "
                  << e.sentence() << ": " << e.what() << "\n";
        return kExitValidation;
      }
      return kExitOk;
    }
    if (*inspect) {
      size_t begin = 0, end = 0;
      if (!ParseRange(range, &begin, &end)) {
        std::cerr << "silverner: bad --range " << range << "\n";
        return kExitFatal;
      }
      std::cout << InspectCorpus(ReadCorpusFile(corpus_path), begin, end);
      return kExitOk;
    }
  } catch (const CorpusFormatError &e) {
    std::cerr << "silverner: corpus line " << e.line() << ": " << e.what() << "\n";
    return kExitFatal;
  } catch (const std::exception &e) {
    std::cerr << "silverner: " << e.what() << "\n";
    return kExitFatal;
  }
  return kExitFatal;
}

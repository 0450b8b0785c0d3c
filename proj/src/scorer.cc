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

#include "silverner/scorer.h"

#include <algorithm>
#include <cstdio>

#include "json.hpp"

namespace silverner {

double F1(double precision, double recall) {
  const double sum = precision + recall;
  return sum > 0 ? 2 * precision * recall / sum : 0;
}

double Precision(double credit, uint64_t predicted, uint64_t gold) {
  if (predicted == 0) return gold == 0 ? 1 : 0;
  return credit / static_cast<double>(predicted);
}

double Recall(double credit, uint64_t predicted, uint64_t gold) {
  if (gold == 0) return predicted == 0 ? 1 : 0;
  return credit / static_cast<double>(gold);
}

std::vector<EntitySpan> ExtractEntities(const Corpus &corpus) {
  std::vector<EntitySpan> entities;
  for (size_t s = 0; s < corpus.sentences.size(); ++s) {
    const auto &tokens = corpus.sentences[s].tokens;
    for (size_t i = 0; i < tokens.size();) {
      const BioTag &tag = tokens[i].tag;
      if (tag.IsOutside()) {
        ++i;
        continue;
      }
      // A stray I-X opens an entity, as conlleval does.
      size_t j = i + 1;
      while (j < tokens.size() &&
             tokens[j].tag.prefix == BioTag::Prefix::kInside &&
             tokens[j].tag.cls == tag.cls) {
        ++j;
      }
      entities.push_back({s, i, j, tag.cls});
      i = j;
    }
  }
  return entities;
}

namespace {

void CheckTokens(const Corpus &gold, const Corpus &pred) {
  const size_t shared = std::min(gold.sentences.size(), pred.sentences.size());
  for (size_t s = 0; s < shared; ++s) {
    const auto &a = gold.sentences[s].tokens;
    const auto &b = pred.sentences[s].tokens;
    bool same = a.size() == b.size();
    for (size_t i = 0; same && i < a.size(); ++i) same = a[i].text == b[i].text;
    if (!same) {
      throw TokenMismatchError(
          "token sequences diverge at sentence " + std::to_string(s), s);
    }
  }
  if (gold.sentences.size() != pred.sentences.size()) {
    throw TokenMismatchError(
        "sentence counts differ (gold " + std::to_string(gold.sentences.size()) +
            ", predicted " + std::to_string(pred.sentences.size()) +
            "); first unmatched sentence " + std::to_string(shared),
        shared);
  }
}

}  // namespace

Score ScoreCorpora(const Corpus &gold, const Corpus &pred, ScoreMode mode) {
  CheckTokens(gold, pred);
  const auto gold_entities = ExtractEntities(gold);
  const auto pred_entities = ExtractEntities(pred);

  std::map<EntityClass, ClassScore> classes;
  for (EntityClass cls : kAllClasses) classes[cls];
  for (const auto &g : gold_entities) ++classes[g.cls].gold;
  for (const auto &p : pred_entities) ++classes[p.cls].predicted;

  std::vector<bool> used(gold_entities.size(), false);
  uint64_t credited = 0;
  size_t first_gold = 0;  // first gold entity of the current sentence
  for (const auto &p : pred_entities) {
    while (first_gold < gold_entities.size() &&
           gold_entities[first_gold].sentence < p.sentence) {
      ++first_gold;
    }
    double best_credit = 0;
    size_t best = gold_entities.size();
    for (size_t g = first_gold;
         g < gold_entities.size() && gold_entities[g].sentence == p.sentence; ++g) {
      const EntitySpan &candidate = gold_entities[g];
      if (used[g] || candidate.cls != p.cls) continue;
      double credit = 0;
      if (mode == ScoreMode::kStrict) {
        credit = candidate.begin == p.begin && candidate.end == p.end ? 1 : 0;
      } else {
        const size_t lo = std::max(candidate.begin, p.begin);
        const size_t hi = std::min(candidate.end, p.end);
        if (hi > lo) {
          credit = static_cast<double>(hi - lo) /
                   static_cast<double>(candidate.end - candidate.begin);
        }
      }
      if (credit > best_credit) {
        best_credit = credit;
        best = g;
      }
    }
    if (best < gold_entities.size()) {
      used[best] = true;
      classes[p.cls].credit += best_credit;
      ++credited;
    }
  }

  Score score;
  for (auto &[cls, c] : classes) {
    c.precision = Precision(c.credit, c.predicted, c.gold);
    c.recall = Recall(c.credit, c.predicted, c.gold);
    c.f1 = F1(c.precision, c.recall);
    score.credit += c.credit;
    score.predicted += c.predicted;
    score.gold += c.gold;
    score.per_class[std::string(ClassCode(cls))] = c;
  }
  score.precision = Precision(score.credit, score.predicted, score.gold);
  score.recall = Recall(score.credit, score.predicted, score.gold);
  score.f1 = F1(score.precision, score.recall);
  score.tp = credited;
  score.fp = score.predicted - credited;
  score.fn = score.gold - credited;
  return score;
}

std::string ScoreJson(const Score &score, ScoreMode mode) {
  nlohmann::ordered_json json;
  json["mode"] = mode == ScoreMode::kStrict ? "strict" : "partial";
  json["precision"] = score.precision;
  json["recall"] = score.recall;
  json["f1"] = score.f1;
  json["credit"] = score.credit;
  json["predicted"] = score.predicted;
  json["gold"] = score.gold;
  json["tp"] = score.tp;
  json["fp"] = score.fp;
  json["fn"] = score.fn;
  json["per_class"] = nlohmann::ordered_json::object();
  for (const auto &[key, c] : score.per_class) {
    json["per_class"][key] = {{"precision", c.precision}, {"recall", c.recall},
                              {"f1", c.f1},               {"credit", c.credit},
                              {"predicted", c.predicted}, {"gold", c.gold}};
  }
  return json.dump(2) + "\n";
}

std::string ScoreText(const Score &score, ScoreMode mode) {
  char line[160];
  std::string out = mode == ScoreMode::kStrict ? "mode: strict\n"
                                               : "mode: partial\n";
  std::snprintf(line, sizeof(line), "%-6s %9s %9s %9s %9s %9s\n", "class",
                "P", "R", "F1", "pred", "gold");
  out += line;
  auto row = [&](const std::string &name, double p, double r, double f,
                 uint64_t pred, uint64_t gold) {
    std::snprintf(line, sizeof(line), "%-6s %9.4f %9.4f %9.4f %9llu %9llu\n",
                  name.c_str(), p, r, f, static_cast<unsigned long long>(pred),
                  static_cast<unsigned long long>(gold));
    out += line;
  };
  for (const auto &[key, c] : score.per_class) {
    row(key, c.precision, c.recall, c.f1, c.predicted, c.gold);
  }
  row("ALL", score.precision, score.recall, score.f1, score.predicted,
      score.gold);
  return out;
}

}  // namespace silverner

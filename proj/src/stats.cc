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

#include "silverner/stats.h"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace silverner {

namespace {

constexpr std::pair<std::string_view, std::string_view> kTagRows[] = {
    {"O", "Not NE"}, {"ORG", "Organization"}, {"PER", "Person"}, {"LOC", "Location"}};

constexpr std::pair<std::string_view, std::string_view> kOriginRows[] = {
    {"ALL", "All Classes"}, {"ORG", "Organization"}, {"PER", "Person"},
    {"LOC", "Location"}};

uint64_t NearestRank(const std::map<uint64_t, uint64_t> &histogram,
                     uint64_t total, int percent) {
  uint64_t rank = (static_cast<uint64_t>(percent) * total + 99) / 100;
  if (rank == 0) rank = 1;
  uint64_t seen = 0;
  for (const auto &[length, count] : histogram) {
    seen += count;
    if (seen >= rank) return length;
  }
  return histogram.empty() ? 0 : histogram.rbegin()->first;
}

OriginShare MakeShare(uint64_t annotated, uint64_t detected) {
  OriginShare share;
  share.annotated_tokens = annotated;
  share.detected_tokens = detected;
  const double total = static_cast<double>(annotated + detected);
  share.annotated = static_cast<double>(annotated) / total;
  share.detected = static_cast<double>(detected) / total;
  return share;
}

}  // namespace

void StatsAccumulator::Add(const TaggedSentence &sentence) {
  ++sentences_;
  ++histogram_[sentence.tokens.size()];
  for (const auto &token : sentence.tokens) {
    if (token.tag.IsOutside()) {
      ++outside_;
      continue;
    }
    ++entity_[token.tag.cls];
    if (token.origin == Origin::kAnnotated) ++annotated_[token.tag.cls];
    if (token.origin == Origin::kPredicted) ++predicted_[token.tag.cls];
  }
}

void StatsAccumulator::AddTokens(std::optional<EntityClass> cls,
                                 std::optional<Origin> origin, uint64_t count) {
  if (!cls) {
    outside_ += count;
    return;
  }
  entity_[*cls] += count;
  if (origin == Origin::kAnnotated) annotated_[*cls] += count;
  if (origin == Origin::kPredicted) predicted_[*cls] += count;
}

void StatsAccumulator::Merge(const StatsAccumulator &other) {
  sentences_ += other.sentences_;
  outside_ += other.outside_;
  for (const auto &[cls, n] : other.entity_) entity_[cls] += n;
  for (const auto &[cls, n] : other.annotated_) annotated_[cls] += n;
  for (const auto &[cls, n] : other.predicted_) predicted_[cls] += n;
  for (const auto &[length, n] : other.histogram_) histogram_[length] += n;
}

CorpusStats StatsAccumulator::Finish() const {
  CorpusStats stats;
  stats.sentence_count = sentences_;
  stats.length_histogram = histogram_;

  uint64_t entity_total = 0;
  stats.tag_counts["O"] = outside_;
  for (EntityClass cls : kAllClasses) {
    auto it = entity_.find(cls);
    const uint64_t n = it == entity_.end() ? 0 : it->second;
    stats.tag_counts[std::string(ClassCode(cls))] = n;
    entity_total += n;
  }
  stats.token_count = outside_ + entity_total;

  if (entity_total > 0) {
    for (EntityClass cls : kAllClasses) {
      stats.entity_shares[std::string(ClassCode(cls))] =
          static_cast<double>(stats.tag_counts[std::string(ClassCode(cls))]) /
          static_cast<double>(entity_total);
    }
  }

  uint64_t all_annotated = 0, all_predicted = 0;
  for (EntityClass cls : kAllClasses) {
    auto a = annotated_.find(cls);
    auto p = predicted_.find(cls);
    const uint64_t na = a == annotated_.end() ? 0 : a->second;
    const uint64_t np = p == predicted_.end() ? 0 : p->second;
    all_annotated += na;
    all_predicted += np;
    if (na + np > 0) {
      stats.origin_shares[std::string(ClassCode(cls))] = MakeShare(na, np);
    }
  }
  if (all_annotated + all_predicted > 0) {
    stats.origin_shares["ALL"] = MakeShare(all_annotated, all_predicted);
  }

  if (sentences_ > 0) {
    LengthStats length;
    long double sum = 0;
    for (const auto &[len, count] : histogram_) {
      sum += static_cast<long double>(len) * count;
    }
    const long double mean = sum / sentences_;
    long double squares = 0;
    for (const auto &[len, count] : histogram_) {
      const long double d = static_cast<long double>(len) - mean;
      squares += d * d * count;
    }
    length.mean = static_cast<double>(mean);
    length.std = static_cast<double>(std::sqrt(squares / sentences_));
    length.min = histogram_.begin()->first;
    length.max = histogram_.rbegin()->first;
    length.q25 = NearestRank(histogram_, sentences_, 25);
    length.q50 = NearestRank(histogram_, sentences_, 50);
    length.q75 = NearestRank(histogram_, sentences_, 75);
    stats.length = length;
  }
  return stats;
}

CorpusStats ComputeStats(const Corpus &corpus) {
  StatsAccumulator accumulator;
  for (const auto &sentence : corpus.sentences) accumulator.Add(sentence);
  return accumulator.Finish();
}

double TagPercent(const CorpusStats &stats, std::string_view key) {
  if (stats.token_count == 0) return 0;
  auto it = stats.tag_counts.find(std::string(key));
  if (it == stats.tag_counts.end()) return 0;
  return 100.0 * static_cast<double>(it->second) /
         static_cast<double>(stats.token_count);
}

std::string FormatPercent(double percent) {
  const double truncated = std::floor(percent * 100.0 + 1e-7) / 100.0;
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f%%", truncated);
  return buffer;
}

std::string FormatCount(uint64_t count) {
  std::string digits = std::to_string(count);
  std::string out;
  for (size_t i = 0; i < digits.size(); ++i) {
    if (i > 0 && (digits.size() - i) % 3 == 0) out.push_back(',');
    out.push_back(digits[i]);
  }
  return out;
}

namespace {

std::string RenderJson(const CorpusStats &stats) {
  nlohmann::ordered_json json;
  json["sentences"] = stats.sentence_count;
  json["tokens"] = stats.token_count;
  if (stats.length) {
    const LengthStats &l = *stats.length;
    json["length"] = {{"mean", l.mean}, {"std", l.std}, {"min", l.min},
                      {"max", l.max},   {"q25", l.q25}, {"q50", l.q50},
                      {"q75", l.q75}};
  } else {
    json["length"] = nlohmann::ordered_json::object();
  }
  json["tags"] = nlohmann::ordered_json::object();
  for (const auto &[key, label] : kTagRows) {
    auto it = stats.tag_counts.find(std::string(key));
    json["tags"][std::string(key)] = it == stats.tag_counts.end() ? 0 : it->second;
  }
  json["entity_shares"] = nlohmann::ordered_json::object();
  for (const auto &[key, share] : stats.entity_shares) {
    json["entity_shares"][key] = share;
  }
  json["origin"] = nlohmann::ordered_json::object();
  json["origin_unit"] = "tokens";
  for (const auto &[key, share] : stats.origin_shares) {
    json["origin"][key] = {{"annotated", share.annotated},
                           {"detected", share.detected},
                           {"annotated_tokens", share.annotated_tokens},
                           {"detected_tokens", share.detected_tokens}};
  }
  json["histogram"] = nlohmann::ordered_json::array();
  for (const auto &[length, count] : stats.length_histogram) {
    json["histogram"].push_back({length, count});
  }
  return json.dump(2) + "\n";
}

std::string Pad(std::string text, size_t width) {
  // Pads by code points so accented labels line up.
  size_t visible = 0;
  for (char c : text) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++visible;
  }
  if (visible < width) text.append(width - visible, ' ');
  return text;
}

std::string RenderText(const CorpusStats &stats) {
  std::ostringstream out;
  out << "Sentence length (tokens)\n";
  out << "  " << Pad("Total", 22) << FormatCount(stats.sentence_count) << "\n";
  if (stats.length) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.2f", stats.length->mean);
    out << "  " << Pad("Mean", 22) << buffer << "\n";
    std::snprintf(buffer, sizeof(buffer), "%.2f", stats.length->std);
    out << "  " << Pad("Standard deviation", 22) << buffer << "\n";
    out << "  " << Pad("Min", 22) << stats.length->min << "\n";
    out << "  " << Pad("Max", 22) << stats.length->max << "\n";
    out << "  " << Pad("Percentile 25%", 22) << stats.length->q25 << "\n";
    out << "  " << Pad("Percentile 50%", 22) << stats.length->q50 << "\n";
    out << "  " << Pad("Percentile 75%", 22) << stats.length->q75 << "\n";
  }
  out << "\nTokens: " << FormatCount(stats.token_count) << "\n";

  out << "\nFrequency of each tag\n";
  out << "  " << Pad("Class", 16) << Pad("Total", 16) << "%\n";
  for (const auto &[key, label] : kTagRows) {
    auto it = stats.tag_counts.find(std::string(key));
    const uint64_t n = it == stats.tag_counts.end() ? 0 : it->second;
    out << "  " << Pad(std::string(label), 16) << Pad(FormatCount(n), 16)
        << FormatPercent(TagPercent(stats, key)) << "\n";
  }

  out << "\nFrequency of each entity tag\n";
  out << "  " << Pad("Class", 16) << Pad("Total", 16) << "%\n";
  for (const auto &[key, label] : kTagRows) {
    if (key == "O") continue;
    auto share = stats.entity_shares.find(std::string(key));
    auto count = stats.tag_counts.find(std::string(key));
    out << "  " << Pad(std::string(label), 16)
        << Pad(FormatCount(count == stats.tag_counts.end() ? 0 : count->second), 16)
        << (share == stats.entity_shares.end() ? std::string("-")
                                               : FormatPercent(100.0 * share->second))
        << "\n";
  }

  out << "\nOrigin of entity tokens (token counts)\n";
  out << "  " << Pad("Class", 16) << Pad("Annotated", 12) << "Detected\n";
  for (const auto &[key, label] : kOriginRows) {
    auto it = stats.origin_shares.find(std::string(key));
    if (it == stats.origin_shares.end()) continue;
    out << "  " << Pad(std::string(label), 16)
        << Pad(FormatPercent(100.0 * it->second.annotated), 12)
        << FormatPercent(100.0 * it->second.detected) << "\n";
  }
  return out.str();
}

}  // namespace

std::string RenderReport(const CorpusStats &stats, ReportFormat format) {
  return format == ReportFormat::kJson ? RenderJson(stats) : RenderText(stats);
}

CorpusStats ParseReport(std::string_view text) {
  const auto json = nlohmann::json::parse(text, nullptr, false);
  if (json.is_discarded() || !json.is_object()) {
    throw std::runtime_error("stats report is not a JSON object");
  }
  try {
    CorpusStats stats;
    stats.sentence_count = json.at("sentences").get<uint64_t>();
    stats.token_count = json.at("tokens").get<uint64_t>();
    const auto &length = json.at("length");
    if (!length.empty()) {
      LengthStats l;
      l.mean = length.at("mean").get<double>();
      l.std = length.at("std").get<double>();
      l.min = length.at("min").get<uint64_t>();
      l.max = length.at("max").get<uint64_t>();
      l.q25 = length.at("q25").get<uint64_t>();
      l.q50 = length.at("q50").get<uint64_t>();
      l.q75 = length.at("q75").get<uint64_t>();
      stats.length = l;
    }
    for (const auto &[key, value] : json.at("tags").items()) {
      stats.tag_counts[key] = value.get<uint64_t>();
    }
    for (const auto &[key, value] : json.at("entity_shares").items()) {
      stats.entity_shares[key] = value.get<double>();
    }
    for (const auto &[key, value] : json.at("origin").items()) {
      OriginShare share;
      share.annotated = value.at("annotated").get<double>();
      share.detected = value.at("detected").get<double>();
      share.annotated_tokens = value.at("annotated_tokens").get<uint64_t>();
      share.detected_tokens = value.at("detected_tokens").get<uint64_t>();
      stats.origin_shares[key] = share;
    }
    for (const auto &entry : json.at("histogram")) {
      stats.length_histogram[entry.at(0).get<uint64_t>()] =
          entry.at(1).get<uint64_t>();
    }
    return stats;
  } catch (const nlohmann::json::exception &e) {
    throw std::runtime_error(std::string("malformed stats report: ") + e.what());
  }
}

}  // namespace silverner

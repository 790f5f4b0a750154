// Copyright 2026 The docstitch Authors.
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

#pragma once

// Sentence-level bitext filtering baseline: deduplication followed by a
// fixed sequence of rejection rules.

#include <array>
#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "docstitch/error.hpp"
#include "docstitch/reconstruct.hpp"
#include "docstitch/tsv.hpp"
#include "docstitch/unicode.hpp"

namespace docstitch {

struct SentFilterConfig {
  double max_punct_frac = 0.5;
  double max_len_ratio = 1.5;
  double lid_threshold = 0.5;
  double sim_threshold = 0.85;
  double charset_min_frac = 0.8;

  void validate() const {
    auto unit = [](double v, const char *name) {
      if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(std::string(name) + " must lie in [0,1]");
    };
    unit(max_punct_frac, "max_punct_frac");
    unit(lid_threshold, "lid_threshold");
    unit(sim_threshold, "sim_threshold");
    unit(charset_min_frac, "charset_min_frac");
    if (!(max_len_ratio >= 1.0)) throw ConfigError("max_len_ratio must be at least 1");
  }
};

struct SimilarityHandle {
  std::string identifier;
  std::function<double(std::string_view src, std::string_view tgt)> similarity;
};

enum class RejectReason { empty, punct, charset, ratio, lid, sim };

inline constexpr std::array<RejectReason, 6> kRejectReasons = {
    RejectReason::empty, RejectReason::punct, RejectReason::charset,
    RejectReason::ratio, RejectReason::lid,   RejectReason::sim};

inline std::string_view to_string(RejectReason r) {
  switch (r) {
    case RejectReason::empty: return "empty";
    case RejectReason::punct: return "punct";
    case RejectReason::charset: return "charset";
    case RejectReason::ratio: return "ratio";
    case RejectReason::lid: return "lid";
    case RejectReason::sim: return "sim";
  }
  return "";
}

// Expected characters of one language, taken from a character histogram.
class CharsetTable {
 public:
  CharsetTable() = default;
  explicit CharsetTable(std::unordered_set<char32_t> chars) : chars_(std::move(chars)) {}

  // Histogram file: one entry per line, "<char>" or "<char>\t<count>".
  // Entries with a zero count are ignored.
  static CharsetTable from_stream(std::istream &in) {
    std::unordered_set<char32_t> chars;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto fields = tsv::split(tsv::chomp(line));
      if (fields[0].empty()) continue;
      std::size_t i = 0;
      const char32_t c = unicode::next(fields[0], i);
      if (i != fields[0].size()) throw ParseError("histogram entry is not a single character", line_no);
      if (fields.size() > 1 && fields[1] == "0") continue;
      chars.insert(c);
    }
    return CharsetTable(std::move(chars));
  }

  static CharsetTable from_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open character histogram " + path);
    return from_stream(in);
  }

  static CharsetTable from_text(std::string_view sample) {
    std::unordered_set<char32_t> chars;
    for (std::size_t i = 0; i < sample.size();) chars.insert(unicode::next(sample, i));
    return CharsetTable(std::move(chars));
  }

  // Punctuation and digits are language-neutral and always expected.
  bool expects(char32_t c) const { return chars_.count(c) || unicode::is_punct(c) || unicode::is_digit(c); }

 private:
  std::unordered_set<char32_t> chars_;
};

class CharsetRegistry {
 public:
  void add(std::string lang, CharsetTable table) { tables_[std::move(lang)] = std::move(table); }

  const CharsetTable &get(const std::string &lang) const {
    auto it = tables_.find(lang);
    if (it == tables_.end()) throw ConfigError("no character histogram configured for language '" + lang + "'");
    return it->second;
  }

 private:
  std::unordered_map<std::string, CharsetTable> tables_;
};

// Fraction of non-space characters that are punctuation (0 for no such chars).
inline double punct_fraction(std::string_view s) {
  std::size_t total = 0, punct = 0;
  for (std::size_t i = 0; i < s.size();) {
    const char32_t c = unicode::next(s, i);
    if (unicode::is_space(c)) continue;
    ++total;
    punct += unicode::is_punct(c);
  }
  return total ? static_cast<double>(punct) / static_cast<double>(total) : 0.0;
}

inline double charset_fraction(std::string_view s, const CharsetTable &table) {
  std::size_t total = 0, expected = 0;
  for (std::size_t i = 0; i < s.size();) {
    const char32_t c = unicode::next(s, i);
    if (unicode::is_space(c)) continue;
    ++total;
    expected += table.expects(c);
  }
  return total ? static_cast<double>(expected) / static_cast<double>(total) : 1.0;
}

inline std::size_t whitespace_tokens(std::string_view s) {
  std::size_t n = 0;
  bool in_token = false;
  for (std::size_t i = 0; i < s.size();) {
    const bool space = unicode::is_space(unicode::next(s, i));
    if (!space && !in_token) ++n;
    in_token = !space;
  }
  return n;
}

// max(a,b)/min(a,b); infinite when exactly one side is empty.
inline double length_ratio(std::size_t a, std::size_t b) {
  const auto lo = std::min(a, b), hi = std::max(a, b);
  if (lo == 0) return hi == 0 ? 1.0 : std::numeric_limits<double>::infinity();
  return static_cast<double>(hi) / static_cast<double>(lo);
}

struct LanguagePair {
  std::string src;
  std::string tgt;
};

struct FilterModels {
  const ClassifierHandle *lid_primary = nullptr;
  const ClassifierHandle *lid_secondary = nullptr;
  const SimilarityHandle *similarity = nullptr;
  const CharsetRegistry *charsets = nullptr;
};

// First failing rule, or nullopt when the pair is kept.
inline std::optional<RejectReason> filter_record(std::string_view src, std::string_view tgt,
                                                 const SentFilterConfig &cfg, const LanguagePair &langs,
                                                 const FilterModels &models) {
  if (!models.charsets) throw ConfigError("filter_record: no character histograms configured");
  const CharsetTable &src_chars = models.charsets->get(langs.src);
  const CharsetTable &tgt_chars = models.charsets->get(langs.tgt);

  const std::size_t src_tokens = whitespace_tokens(src);
  const std::size_t tgt_tokens = whitespace_tokens(tgt);
  if (src_tokens == 0 || tgt_tokens == 0) return RejectReason::empty;
  if (punct_fraction(src) > cfg.max_punct_frac || punct_fraction(tgt) > cfg.max_punct_frac) {
    return RejectReason::punct;
  }
  if (charset_fraction(src, src_chars) < cfg.charset_min_frac ||
      charset_fraction(tgt, tgt_chars) < cfg.charset_min_frac) {
    return RejectReason::charset;
  }
  if (length_ratio(src_tokens, tgt_tokens) > cfg.max_len_ratio) return RejectReason::ratio;
  if (models.lid_primary) {
    const bool low_primary = (*models.lid_primary)(tgt, langs.tgt) < cfg.lid_threshold;
    const bool low_secondary =
        models.lid_secondary ? (*models.lid_secondary)(tgt, langs.tgt) < cfg.lid_threshold : true;
    if (low_primary && low_secondary) return RejectReason::lid;
  }
  if (models.similarity && models.similarity->similarity(src, tgt) < cfg.sim_threshold) return RejectReason::sim;
  return std::nullopt;
}

// Exact (src, tgt) pair deduplication keeping first occurrences.
class PairDeduplicator {
 public:
  // True the first time a pair is offered.
  bool insert(std::string_view src, std::string_view tgt) {
    std::string key;
    key.reserve(src.size() + tgt.size() + 12);
    key.append(std::to_string(src.size())).push_back(':');
    key.append(src);
    key.append(tgt);
    return seen_.insert(std::move(key)).second;
  }

  std::size_t size() const { return seen_.size(); }

 private:
  std::unordered_set<std::string> seen_;
};

inline std::vector<SegmentPair> dedup_stream(std::span<const SegmentPair> records) {
  PairDeduplicator seen;
  std::vector<SegmentPair> out;
  for (const auto &r : records) {
    if (seen.insert(r.src, r.tgt)) out.push_back(r);
  }
  return out;
}

struct FilterReport {
  std::size_t input = 0;
  std::size_t duplicates = 0;
  std::size_t kept = 0;
  std::map<RejectReason, std::size_t> rejected;

  std::size_t removed() const {
    std::size_t n = duplicates;
    for (const auto &[_, c] : rejected) n += c;
    return n;
  }
};

struct Rejection {
  SegmentPair pair;
  RejectReason reason;
};

struct FilterResult {
  std::vector<SegmentPair> kept;
  std::vector<Rejection> rejected;
  FilterReport report;
};

// Deduplicates, then applies filter_record to each surviving pair.
inline FilterResult filter_stream(std::span<const SegmentPair> records, const SentFilterConfig &cfg,
                                  const LanguagePair &langs, const FilterModels &models) {
  cfg.validate();
  FilterResult result;
  result.report.input = records.size();
  const auto unique = dedup_stream(records);
  result.report.duplicates = records.size() - unique.size();
  for (const auto &pair : unique) {
    if (auto reason = filter_record(pair.src, pair.tgt, cfg, langs, models)) {
      ++result.report.rejected[*reason];
      result.rejected.push_back({pair, *reason});
    } else {
      result.kept.push_back(pair);
    }
  }
  result.report.kept = result.kept.size();
  return result;
}

}  // namespace docstitch

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

// Restores document positions for sentence-level bitext by exact string
// matching of each segment into its monolingual source document.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "docstitch/error.hpp"
#include "docstitch/mono_index.hpp"
#include "docstitch/record.hpp"

namespace docstitch {

struct SegmentPair {
  std::string src;
  std::string tgt;

  bool operator==(const SegmentPair &) const = default;
};

enum class Side { source, target };

// Language identification backend: (text, expected language) -> probability
// that `text` is in that language.
struct ClassifierHandle {
  std::string identifier;
  std::function<double(std::string_view text, std::string_view lang)> classify;

  double operator()(std::string_view text, std::string_view lang) const {
    const double p = classify(text, lang);
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ConfigError("classifier '" + identifier + "' returned " + std::to_string(p) + " outside [0,1]");
    }
    return p;
  }
};

inline ClassifierHandle constant_classifier(double p) {
  return {"const:" + format_real(p), [p](std::string_view, std::string_view) { return p; }};
}

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
};

// Corpus-wide exact occurrence counts per side.
class DupTable {
 public:
  void add(Side side, std::string_view text, std::uint64_t n = 1) {
    auto &map = table(side);
    if (auto it = map.find(text); it != map.end()) {
      it->second += n;
    } else {
      map.emplace(std::string(text), n);
    }
  }

  // 0 for text never seen.
  std::uint64_t count(Side side, std::string_view text) const {
    const auto &map = side == Side::source ? src_ : tgt_;
    auto it = map.find(text);
    return it == map.end() ? 0 : it->second;
  }

  // Folds a partial table (e.g. one shard of a sharded count) into this one.
  void merge(const DupTable &other) {
    for (const auto &[text, n] : other.src_) add(Side::source, text, n);
    for (const auto &[text, n] : other.tgt_) add(Side::target, text, n);
  }

  std::size_t size(Side side) const { return side == Side::source ? src_.size() : tgt_.size(); }
  bool empty() const { return src_.empty() && tgt_.empty(); }

  template <typename F>
  void for_each(Side side, F &&f) const {
    for (const auto &[text, n] : (side == Side::source ? src_ : tgt_)) f(std::string_view(text), n);
  }

 private:
  using Map = std::unordered_map<std::string, std::uint64_t, StringHash, std::equal_to<>>;
  Map &table(Side side) { return side == Side::source ? src_ : tgt_; }

  Map src_;
  Map tgt_;
};

// First pass of reconstruction.
template <typename Range>
DupTable count_duplicates(const Range &corpus) {
  DupTable table;
  for (const auto &pair : corpus) {
    table.add(Side::source, pair.src);
    table.add(Side::target, pair.tgt);
  }
  return table;
}

// Leftmost exact occurrence of `segment` at or after `search_from`; if there
// is none, the leftmost occurrence anywhere.
inline std::optional<CharSpan> match_segment(const MonoDocument &doc, std::string_view segment,
                                             std::size_t search_from) {
  if (segment.empty()) throw std::invalid_argument("match_segment: empty segment text");
  const std::string_view text = doc.norm_text;
  std::size_t byte = std::string_view::npos;
  if (search_from < doc.length()) byte = text.find(segment, doc.byte_offset(search_from));
  if (byte == std::string_view::npos && search_from > 0) byte = text.find(segment);
  if (byte == std::string_view::npos) return std::nullopt;
  const std::size_t start = doc.char_offset(byte);
  const std::size_t end = doc.char_offset(byte + segment.size()) - 1;
  return CharSpan{start, end};
}

namespace detail {

class SideMatcher {
 public:
  SideMatcher(const MonoDocument &doc, const ClassifierHandle &lid, const DupTable *dups, Side side)
      : doc_(doc), lid_(lid), dups_(dups), side_(side) {}

  SideAnnotation annotate(std::string_view text) {
    std::optional<std::uint64_t> dup;
    if (dups_) dup = dups_->count(side_, text);
    const double lid = quantize4(lid_(text, doc_.lang));
    std::optional<CharSpan> span;
    if (!text.empty()) span = match_segment(doc_, text, search_from_);
    if (!span) return SideAnnotation::not_found(lid, dup);
    search_from_ = span->end + 1;
    SideAnnotation a;
    a.start_char = span->start;
    a.end_char = span->end;
    a.paragraph_idx = doc_.paragraphs.paragraph_at(span->start);
    const std::size_t sentence = doc_.sentence_at(span->start);
    a.sentence_idx = sentence == MonoDocument::npos ? 0 : sentence;
    a.lid_prob = lid;
    a.dup_count = dup;
    return a;
  }

 private:
  const MonoDocument &doc_;
  const ClassifierHandle &lid_;
  const DupTable *dups_;
  Side side_;
  std::size_t search_from_ = 0;
};

}  // namespace detail

// Annotates one document's segments (in bitext order).  Segment text is
// whitespace-normalized before matching; segments missing from a side are
// kept with a not-found annotation.  `dups` may be null for corpora without
// duplication annotation.
inline std::vector<AnnotatedRecord> annotate_document(const MonoDocument &src_doc, const MonoDocument &tgt_doc,
                                                      std::span<const SegmentPair> segments,
                                                      const ClassifierHandle &lid, const DupTable *dups,
                                                      CorpusId corpus = CorpusId::other) {
  if (src_doc.doc_id != tgt_doc.doc_id) {
    throw PipelineError("document pair mismatch: source '" + src_doc.doc_id + "' vs target '" + tgt_doc.doc_id + "'");
  }
  detail::SideMatcher src(src_doc, lid, dups, Side::source);
  detail::SideMatcher tgt(tgt_doc, lid, dups, Side::target);
  std::vector<AnnotatedRecord> records;
  records.reserve(segments.size());
  for (std::size_t i = 0; i < segments.size(); ++i) {
    AnnotatedRecord r;
    r.corpus = corpus;
    r.doc_id = src_doc.doc_id;
    r.seg_index = i;
    r.src_text = normalize_segment(segments[i].src);
    r.tgt_text = normalize_segment(segments[i].tgt);
    r.src = src.annotate(r.src_text);
    r.tgt = tgt.annotate(r.tgt_text);
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace docstitch

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

// Annotated bitext records and their TSV encoding.
//
// One record per line, 19 tab-separated columns:
//
//   corpus_id doc_id seg_index src_text tgt_text
//   src_paragraph_idx src_sentence_idx src_start_char src_end_char src_lid_prob src_dup_count
//   tgt_paragraph_idx tgt_sentence_idx tgt_start_char tgt_end_char tgt_lid_prob tgt_dup_count
//   sub_doc_id slide_score
//
// Absent optionals are written as "-".  A side whose text was not found in
// its monolingual document has "-" in all four offset columns.  Reals are
// written with exactly four decimals.  Scored output appends a 20th column,
// kept_at, holding a comma-separated list of cutoff tags (or "-").

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>

#include "docstitch/error.hpp"
#include "docstitch/tsv.hpp"

namespace docstitch {

// Inclusive code point range [start, end].
struct CharSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - start + 1; }
  bool contains(std::size_t offset) const { return offset >= start && offset <= end; }
  bool operator==(const CharSpan &) const = default;
};

enum class CorpusId { paracrawl, news_commentary, europarl, other };

inline std::string_view to_string(CorpusId id) {
  switch (id) {
    case CorpusId::paracrawl: return "paracrawl";
    case CorpusId::news_commentary: return "news_commentary";
    case CorpusId::europarl: return "europarl";
    case CorpusId::other: return "other";
  }
  return "other";
}

inline std::optional<CorpusId> corpus_from_string(std::string_view s) {
  if (s == "paracrawl") return CorpusId::paracrawl;
  if (s == "news_commentary") return CorpusId::news_commentary;
  if (s == "europarl") return CorpusId::europarl;
  if (s == "other") return CorpusId::other;
  return std::nullopt;
}

// Only ParaCrawl carries duplication counts.
inline bool has_duplication_annotation(CorpusId id) { return id == CorpusId::paracrawl; }

struct SideAnnotation {
  bool found = true;
  std::size_t paragraph_idx = 0;
  std::size_t sentence_idx = 0;
  std::size_t start_char = 0;
  std::size_t end_char = 0;  // inclusive
  double lid_prob = 0.0;
  std::optional<std::uint64_t> dup_count;

  CharSpan span() const { return {start_char, end_char}; }

  static SideAnnotation not_found(double lid_prob, std::optional<std::uint64_t> dup_count) {
    SideAnnotation a;
    a.found = false;
    a.lid_prob = lid_prob;
    a.dup_count = dup_count;
    return a;
  }

  bool operator==(const SideAnnotation &) const = default;
};

struct AnnotatedRecord {
  CorpusId corpus = CorpusId::other;
  std::string doc_id;
  std::size_t seg_index = 0;
  std::string src_text;
  std::string tgt_text;
  SideAnnotation src;
  SideAnnotation tgt;
  std::optional<std::string> sub_doc_id;
  std::optional<double> slide_score;

  bool operator==(const AnnotatedRecord &) const = default;
};

// Filtering cutoffs, as a bit set.
enum class Cutoff : unsigned { loose75 = 1u, medium50 = 2u, strict25 = 4u };

inline constexpr std::array<Cutoff, 3> kCutoffs = {Cutoff::loose75, Cutoff::medium50, Cutoff::strict25};

inline std::string_view to_string(Cutoff c) {
  switch (c) {
    case Cutoff::loose75: return "loose75";
    case Cutoff::medium50: return "medium50";
    case Cutoff::strict25: return "strict25";
  }
  return "";
}

inline double fraction_of(Cutoff c) {
  switch (c) {
    case Cutoff::loose75: return 0.75;
    case Cutoff::medium50: return 0.50;
    case Cutoff::strict25: return 0.25;
  }
  return 1.0;
}

inline std::optional<Cutoff> cutoff_from_string(std::string_view s) {
  for (Cutoff c : kCutoffs) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

class CutoffSet {
 public:
  CutoffSet() = default;
  void insert(Cutoff c) { bits_ |= static_cast<unsigned>(c); }
  bool contains(Cutoff c) const { return bits_ & static_cast<unsigned>(c); }
  bool empty() const { return bits_ == 0; }
  bool operator==(const CutoffSet &) const = default;

 private:
  unsigned bits_ = 0;
};

struct ScoredRecord {
  AnnotatedRecord record;
  CutoffSet kept_at;

  bool operator==(const ScoredRecord &) const = default;
};

inline constexpr std::size_t kRecordColumns = 19;
inline constexpr std::size_t kScoredRecordColumns = 20;

inline constexpr std::array<std::string_view, kScoredRecordColumns> kColumnNames = {
    "corpus_id",         "doc_id",           "seg_index",      "src_text",       "tgt_text",
    "src_paragraph_idx", "src_sentence_idx", "src_start_char", "src_end_char",   "src_lid_prob",
    "src_dup_count",     "tgt_paragraph_idx", "tgt_sentence_idx", "tgt_start_char", "tgt_end_char",
    "tgt_lid_prob",      "tgt_dup_count",    "sub_doc_id",     "slide_score",    "kept_at"};

inline constexpr std::string_view kAbsent = "-";

// Rounds to the four decimals the TSV encoding keeps.
inline double quantize4(double v) { return std::round(v * 10000.0) / 10000.0; }

inline std::string format_real(double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof(buf), "%.4f", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

namespace detail {

inline void check_column_count(std::size_t got, std::size_t expected, std::size_t line_no) {
  if (got == expected) return;
  std::string msg = "expected " + std::to_string(expected) + " columns, got " + std::to_string(got);
  if (got < expected) {
    msg += "; missing column '" + std::string(kColumnNames[got]) + "'";
  } else {
    msg += "; unexpected extra column " + std::to_string(expected + 1);
  }
  if (line_no) msg = "line " + std::to_string(line_no) + ": " + msg;
  throw SchemaError(msg);
}

[[noreturn]] inline void bad_field(std::size_t column, std::string_view value, std::string_view why,
                                   std::size_t line_no) {
  throw ParseError("column '" + std::string(kColumnNames[column]) + "' " + std::string(why) + ": \"" +
                       std::string(value) + "\"",
                   line_no);
}

inline std::uint64_t parse_uint(std::string_view s, std::size_t column, std::size_t line_no) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    bad_field(column, s, "is not a non-negative integer", line_no);
  }
  return v;
}

inline double parse_unit_real(std::string_view s, std::size_t column, std::size_t line_no) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    bad_field(column, s, "is not a number", line_no);
  }
  if (!(v >= 0.0 && v <= 1.0)) bad_field(column, s, "is outside [0,1]", line_no);
  return v;
}

inline SideAnnotation parse_side(const std::vector<std::string_view> &f, std::size_t first,
                                 std::size_t line_no) {
  SideAnnotation a;
  std::size_t absent = 0;
  for (std::size_t c = first; c < first + 4; ++c) absent += f[c] == kAbsent;
  if (absent == 4) {
    a.found = false;
  } else if (absent != 0) {
    for (std::size_t c = first; c < first + 4; ++c) {
      if (f[c] == kAbsent) bad_field(c, f[c], "is absent while other offsets are present", line_no);
    }
  } else {
    a.paragraph_idx = parse_uint(f[first], first, line_no);
    a.sentence_idx = parse_uint(f[first + 1], first + 1, line_no);
    a.start_char = parse_uint(f[first + 2], first + 2, line_no);
    a.end_char = parse_uint(f[first + 3], first + 3, line_no);
    if (a.start_char > a.end_char) bad_field(first + 3, f[first + 3], "precedes start_char", line_no);
  }
  a.lid_prob = parse_unit_real(f[first + 4], first + 4, line_no);
  if (f[first + 5] != kAbsent) a.dup_count = parse_uint(f[first + 5], first + 5, line_no);
  return a;
}

inline void append_side(std::string &out, const SideAnnotation &a) {
  auto field = [&out](std::string_view v) {
    out.push_back('\t');
    out.append(v);
  };
  if (a.found) {
    field(std::to_string(a.paragraph_idx));
    field(std::to_string(a.sentence_idx));
    field(std::to_string(a.start_char));
    field(std::to_string(a.end_char));
  } else {
    for (int i = 0; i < 4; ++i) field(kAbsent);
  }
  field(format_real(a.lid_prob));
  field(a.dup_count ? std::to_string(*a.dup_count) : std::string(kAbsent));
}

inline AnnotatedRecord parse_fields(const std::vector<std::string_view> &f, std::size_t line_no) {
  AnnotatedRecord r;
  const auto corpus = corpus_from_string(f[0]);
  if (!corpus) bad_field(0, f[0], "is not a known corpus tag", line_no);
  r.corpus = *corpus;
  r.doc_id = std::string(f[1]);
  r.seg_index = parse_uint(f[2], 2, line_no);
  r.src_text = std::string(f[3]);
  r.tgt_text = std::string(f[4]);
  r.src = parse_side(f, 5, line_no);
  r.tgt = parse_side(f, 11, line_no);
  if (f[17] != kAbsent) r.sub_doc_id = std::string(f[17]);
  if (f[18] != kAbsent) r.slide_score = parse_unit_real(f[18], 18, line_no);
  return r;
}

}  // namespace detail

// Throws EncodingError if `r` cannot be written as one TSV line.
inline void validate_for_encoding(const AnnotatedRecord &r) {
  auto check = [](std::string_view name, std::string_view v) {
    if (!tsv::is_clean_field(v)) {
      throw EncodingError(std::string(name) + " contains a tab or newline; normalize it first");
    }
  };
  check("doc_id", r.doc_id);
  check("src_text", r.src_text);
  check("tgt_text", r.tgt_text);
  if (r.sub_doc_id) {
    check("sub_doc_id", *r.sub_doc_id);
    if (*r.sub_doc_id == kAbsent) throw EncodingError("sub_doc_id \"-\" collides with the absent marker");
  }
  for (const SideAnnotation *a : {&r.src, &r.tgt}) {
    if (a->found && a->start_char > a->end_char) throw EncodingError("start_char after end_char");
    if (!(a->lid_prob >= 0.0 && a->lid_prob <= 1.0)) throw EncodingError("lid_prob outside [0,1]");
  }
  if (r.slide_score && !(*r.slide_score >= 0.0 && *r.slide_score <= 1.0)) {
    throw EncodingError("slide_score outside [0,1]");
  }
}

inline std::string serialize_record(const AnnotatedRecord &r) {
  validate_for_encoding(r);
  std::string out;
  out.reserve(r.src_text.size() + r.tgt_text.size() + r.doc_id.size() + 96);
  out.append(to_string(r.corpus));
  out.push_back('\t');
  out.append(r.doc_id);
  out.push_back('\t');
  out.append(std::to_string(r.seg_index));
  out.push_back('\t');
  out.append(r.src_text);
  out.push_back('\t');
  out.append(r.tgt_text);
  detail::append_side(out, r.src);
  detail::append_side(out, r.tgt);
  out.push_back('\t');
  out.append(r.sub_doc_id ? std::string_view(*r.sub_doc_id) : kAbsent);
  out.push_back('\t');
  out.append(r.slide_score ? format_real(*r.slide_score) : std::string(kAbsent));
  return out;
}

// `line_no` (1-based, 0 = unknown) is only used in error messages.
inline AnnotatedRecord parse_record(std::string_view line, std::size_t line_no = 0) {
  const auto fields = tsv::split(tsv::chomp(line));
  detail::check_column_count(fields.size(), kRecordColumns, line_no);
  return detail::parse_fields(fields, line_no);
}

inline std::string format_cutoffs(const CutoffSet &set) {
  std::string out;
  for (Cutoff c : kCutoffs) {
    if (!set.contains(c)) continue;
    if (!out.empty()) out.push_back(',');
    out.append(to_string(c));
  }
  return out.empty() ? std::string(kAbsent) : out;
}

inline CutoffSet parse_cutoffs(std::string_view s, std::size_t line_no = 0) {
  CutoffSet set;
  if (s == kAbsent) return set;
  for (std::string_view tag : tsv::split(s, ',')) {
    const auto c = cutoff_from_string(tag);
    if (!c) detail::bad_field(19, s, "holds an unknown cutoff tag", line_no);
    set.insert(*c);
  }
  return set;
}

inline std::string serialize_scored_record(const ScoredRecord &r) {
  std::string out = serialize_record(r.record);
  out.push_back('\t');
  out.append(format_cutoffs(r.kept_at));
  return out;
}

inline ScoredRecord parse_scored_record(std::string_view line, std::size_t line_no = 0) {
  const auto fields = tsv::split(tsv::chomp(line));
  detail::check_column_count(fields.size(), kScoredRecordColumns, line_no);
  ScoredRecord r;
  r.record = detail::parse_fields(fields, line_no);
  r.kept_at = parse_cutoffs(fields[19], line_no);
  return r;
}

}  // namespace docstitch

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

// Monolingual document index: whitespace normalization, paragraph map and
// sentence boundaries.  Every offset is a code point offset into the
// normalized text.

#include <algorithm>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "docstitch/record.hpp"
#include "docstitch/sentence_splitter.hpp"
#include "docstitch/unicode.hpp"

namespace docstitch {

// Maps normalized offsets to paragraph indices.  Paragraph k covers
// [start(k), start(k+1)), so the space separating two paragraphs belongs to
// the earlier one.
class ParagraphMap {
 public:
  ParagraphMap() = default;
  ParagraphMap(std::vector<std::size_t> starts, std::size_t text_length)
      : starts_(std::move(starts)), length_(text_length) {}

  std::size_t paragraph_at(std::size_t offset) const {
    auto it = std::upper_bound(starts_.begin(), starts_.end(), offset);
    return it == starts_.begin() ? 0 : static_cast<std::size_t>(it - starts_.begin()) - 1;
  }

  const std::vector<std::size_t> &starts() const { return starts_; }
  std::size_t paragraph_count() const { return starts_.size(); }
  // Domain is [0, text_length).
  std::size_t text_length() const { return length_; }
  bool empty() const { return length_ == 0; }

  bool operator==(const ParagraphMap &) const = default;

 private:
  std::vector<std::size_t> starts_;
  std::size_t length_ = 0;
};

struct NormalizedText {
  std::string text;
  ParagraphMap paragraphs;
};

// Collapses every run of Unicode whitespace to one U+0020 and trims both
// ends.  Paragraphs are the blocks of `raw` separated by one or more lines
// holding only whitespace.
inline NormalizedText normalize_whitespace(std::string_view raw) {
  NormalizedText out;
  out.text.reserve(raw.size());
  std::vector<std::size_t> starts;
  std::size_t cp = 0;        // code points emitted so far
  bool pending_space = false;
  bool saw_blank_line = false;

  std::size_t line_begin = 0;
  while (line_begin <= raw.size()) {
    std::size_t line_end = raw.find('\n', line_begin);
    if (line_end == std::string_view::npos) line_end = raw.size();
    const std::string_view line = raw.substr(line_begin, line_end - line_begin);

    bool blank = true;
    for (std::size_t i = 0; i < line.size();) {
      if (!unicode::is_space(unicode::next(line, i))) {
        blank = false;
        break;
      }
    }
    if (blank) {
      if (cp > 0) saw_blank_line = true;
      pending_space = true;
    } else {
      bool first_in_line = true;
      for (std::size_t i = 0; i < line.size();) {
        const std::size_t at = i;
        const char32_t c = unicode::next(line, i);
        if (unicode::is_space(c)) {
          pending_space = true;
          continue;
        }
        if (pending_space && cp > 0) {
          out.text.push_back(' ');
          ++cp;
        }
        pending_space = false;
        if (first_in_line && (starts.empty() || saw_blank_line)) {
          starts.push_back(cp);
          saw_blank_line = false;
        }
        first_in_line = false;
        out.text.append(line.substr(at, i - at));
        ++cp;
      }
    }
    pending_space = true;  // the newline itself
    line_begin = line_end + 1;
  }
  out.paragraphs = ParagraphMap(std::move(starts), cp);
  return out;
}

struct MonoDocument {
  std::string doc_id;
  std::string raw_text;
  std::string norm_text;
  ParagraphMap paragraphs;
  std::vector<CharSpan> sentence_spans;
  std::string lang;

  // Code point count of norm_text.
  std::size_t length() const { return cp_byte_.empty() ? norm_text.size() : cp_byte_.size() - 1; }

  // Byte offset of code point `cp` (cp == length() gives norm_text.size()).
  std::size_t byte_offset(std::size_t cp) const { return cp_byte_.empty() ? cp : cp_byte_[cp]; }

  // Code point index of the character starting at byte `byte`.
  std::size_t char_offset(std::size_t byte) const {
    if (cp_byte_.empty()) return byte;
    return static_cast<std::size_t>(std::lower_bound(cp_byte_.begin(), cp_byte_.end(), byte) - cp_byte_.begin());
  }

  std::string_view slice(CharSpan span) const {
    const std::size_t b = byte_offset(span.start);
    return std::string_view(norm_text).substr(b, byte_offset(span.end + 1) - b);
  }

  // Index of the sentence span containing `offset`, or npos.
  std::size_t sentence_at(std::size_t offset) const {
    auto it = std::upper_bound(sentence_spans.begin(), sentence_spans.end(), offset,
                               [](std::size_t off, const CharSpan &s) { return off < s.start; });
    if (it == sentence_spans.begin()) return npos;
    --it;
    return it->contains(offset) ? static_cast<std::size_t>(it - sentence_spans.begin()) : npos;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  // Rebuilds the code point to byte table; called by index_document.
  void build_offsets() {
    cp_byte_.clear();
    if (unicode::is_ascii(norm_text)) return;
    cp_byte_.reserve(norm_text.size() + 1);
    for (std::size_t i = 0; i < norm_text.size(); ++i) {
      if (!unicode::is_continuation_byte(norm_text[i])) cp_byte_.push_back(i);
    }
    cp_byte_.push_back(norm_text.size());
  }

 private:
  // Empty when norm_text is ASCII (identity mapping).
  std::vector<std::size_t> cp_byte_;
};

inline MonoDocument index_document(std::string doc_id, std::string raw_text, std::string lang,
                                   const SentenceSplitter &splitter) {
  MonoDocument doc;
  doc.doc_id = std::move(doc_id);
  doc.lang = std::move(lang);
  NormalizedText norm = normalize_whitespace(raw_text);
  doc.raw_text = std::move(raw_text);
  doc.norm_text = std::move(norm.text);
  doc.paragraphs = std::move(norm.paragraphs);
  doc.build_offsets();
  doc.sentence_spans = splitter.split(doc.norm_text, doc.lang);
  return doc;
}

// Whitespace normalization for a single segment (no paragraph bookkeeping).
inline std::string normalize_segment(std::string_view text) { return normalize_whitespace(text).text; }

}  // namespace docstitch

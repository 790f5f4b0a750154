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

// Splitting annotated documents into sub-documents: maximal runs of
// criteria-passing records that are consecutive on both sides.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "docstitch/error.hpp"
#include "docstitch/record.hpp"

namespace docstitch {

struct BreakConfig {
  // A side keeps its record only with lid_prob strictly above this.
  double lid_threshold = 0.5;
  // A side with a duplication count above this breaks the document.
  std::uint64_t dup_threshold = 100;
  std::size_t min_subdoc_len = 2;

  void validate() const {
    if (!(lid_threshold >= 0.0 && lid_threshold <= 1.0)) throw ConfigError("lid_threshold must lie in [0,1]");
    if (min_subdoc_len < 2) throw ConfigError("min_subdoc_len must be at least 2");
  }
};

struct SubDocument {
  std::string sub_doc_id;
  std::string parent_doc_id;
  std::vector<AnnotatedRecord> records;

  std::size_t size() const { return records.size(); }
};

// Segments are adjacent in the source document when exactly one character
// (the normalized space) separates them.
inline bool is_consecutive(const SideAnnotation &prev, const SideAnnotation &next) {
  if (!prev.found || !next.found) return false;
  return next.start_char == prev.end_char + 2;
}

inline bool side_passes(const SideAnnotation &a, const BreakConfig &cfg) {
  if (!a.found) return false;
  if (!(a.lid_prob > cfg.lid_threshold)) return false;
  if (a.dup_count && *a.dup_count > cfg.dup_threshold) return false;
  return true;
}

inline bool record_passes(const AnnotatedRecord &r, const BreakConfig &cfg) {
  return side_passes(r.src, cfg) && side_passes(r.tgt, cfg);
}

inline std::string make_sub_doc_id(const std::string &doc_id, std::size_t k) {
  return doc_id + "#" + std::to_string(k);
}

// Input: one document's records sorted by seg_index.  Output records carry
// their sub_doc_id.
inline std::vector<SubDocument> break_document(std::span<const AnnotatedRecord> records, const BreakConfig &cfg) {
  cfg.validate();
  std::vector<SubDocument> out;
  if (records.empty()) return out;
  const std::string &doc_id = records.front().doc_id;
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].doc_id != doc_id) {
      throw PipelineError("break_document: mixed doc ids '" + doc_id + "' and '" + records[i].doc_id + "'");
    }
    if (records[i].seg_index <= records[i - 1].seg_index) {
      throw PipelineError("break_document: records of '" + doc_id + "' are not sorted by seg_index (at " +
                          std::to_string(records[i].seg_index) + ")");
    }
  }

  std::vector<const AnnotatedRecord *> run;
  auto flush = [&] {
    if (run.size() >= cfg.min_subdoc_len) {
      SubDocument sub;
      sub.parent_doc_id = doc_id;
      sub.sub_doc_id = make_sub_doc_id(doc_id, out.size());
      sub.records.reserve(run.size());
      for (const AnnotatedRecord *r : run) {
        sub.records.push_back(*r);
        sub.records.back().sub_doc_id = sub.sub_doc_id;
      }
      out.push_back(std::move(sub));
    }
    run.clear();
  };

  for (const AnnotatedRecord &r : records) {
    if (!record_passes(r, cfg)) {
      flush();
      continue;
    }
    if (!run.empty()) {
      const AnnotatedRecord &prev = *run.back();
      if (!is_consecutive(prev.src, r.src) || !is_consecutive(prev.tgt, r.tgt)) flush();
    }
    run.push_back(&r);
  }
  flush();
  return out;
}

}  // namespace docstitch

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

// Document-level quality scoring by averaging QE scores over sliding
// windows of concatenated segments, and rank-based cutoff selection.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "docstitch/docbreak.hpp"
#include "docstitch/error.hpp"
#include "docstitch/reconstruct.hpp"
#include "docstitch/unicode.hpp"

namespace docstitch {

struct WindowConfig {
  std::size_t window = 3;
  std::size_t stride = 1;

  void validate() const {
    if (window < 1) throw ConfigError("window must be at least 1");
    if (stride < 1) throw ConfigError("stride must be at least 1");
  }
};

// Half-open index range [first, last) over a sub-document's segments.
struct WindowRange {
  std::size_t first = 0;
  std::size_t last = 0;

  bool operator==(const WindowRange &) const = default;
};

// Full windows at offsets 0, stride, 2*stride, ...; a sub-document shorter
// than the window gets one window over all of it.
inline std::vector<WindowRange> window_ranges(std::size_t n, const WindowConfig &cfg) {
  cfg.validate();
  std::vector<WindowRange> out;
  if (n == 0) return out;
  if (n < cfg.window) {
    out.push_back({0, n});
    return out;
  }
  for (std::size_t i = 0; i + cfg.window <= n; i += cfg.stride) out.push_back({i, i + cfg.window});
  return out;
}

using TextPair = SegmentPair;

inline std::vector<TextPair> windows(std::span<const TextPair> segments, const WindowConfig &cfg) {
  std::vector<TextPair> out;
  for (const WindowRange &w : window_ranges(segments.size(), cfg)) {
    TextPair joined;
    for (std::size_t i = w.first; i < w.last; ++i) {
      if (i != w.first) {
        joined.src.push_back(' ');
        joined.tgt.push_back(' ');
      }
      joined.src += segments[i].src;
      joined.tgt += segments[i].tgt;
    }
    out.push_back(std::move(joined));
  }
  return out;
}

inline std::vector<TextPair> segment_pairs(const SubDocument &sub) {
  std::vector<TextPair> out;
  out.reserve(sub.records.size());
  for (const AnnotatedRecord &r : sub.records) out.push_back({r.src_text, r.tgt_text});
  return out;
}

inline std::vector<TextPair> windows(const SubDocument &sub, const WindowConfig &cfg) {
  const auto pairs = segment_pairs(sub);
  return windows(pairs, cfg);
}

// Quality-estimation backend: one score in [0,1] per pair, in input order.
struct ScorerHandle {
  std::string identifier;
  std::function<std::vector<double>(std::span<const TextPair>)> score_batch;
  // Largest batch handed to score_batch at once (0 = unlimited).
  std::size_t max_batch = 0;
};

// Scores windows through `scorer`, batching as the scorer asks.  Errors
// carry the index of the first window of the failing batch.
inline std::vector<double> score_windows(std::span<const TextPair> wins, const ScorerHandle &scorer) {
  std::vector<double> scores;
  scores.reserve(wins.size());
  const std::size_t batch = scorer.max_batch ? scorer.max_batch : std::max<std::size_t>(wins.size(), 1);
  for (std::size_t begin = 0; begin < wins.size(); begin += batch) {
    const std::size_t len = std::min(batch, wins.size() - begin);
    std::vector<double> got;
    try {
      got = scorer.score_batch(wins.subspan(begin, len));
    } catch (const ScoringError &e) {
      throw ScoringError(e.what(), begin + e.window_index(), e.retryable());
    } catch (const ProtocolError &) {
      throw;
    } catch (const std::exception &e) {
      throw ScoringError(std::string("scorer '") + scorer.identifier + "' failed at window " +
                             std::to_string(begin) + ": " + e.what(),
                         begin, true);
    }
    if (got.size() != len) {
      throw ProtocolError("scorer '" + scorer.identifier + "' returned " + std::to_string(got.size()) +
                          " scores for " + std::to_string(len) + " windows");
    }
    for (std::size_t i = 0; i < len; ++i) {
      if (!(got[i] >= 0.0 && got[i] <= 1.0)) {
        throw ProtocolError("scorer '" + scorer.identifier + "' returned " + std::to_string(got[i]) +
                            " outside [0,1] for window " + std::to_string(begin + i));
      }
    }
    scores.insert(scores.end(), got.begin(), got.end());
  }
  return scores;
}

// Arithmetic mean of the scores, summed in window order.
inline double mean_score(std::span<const double> scores) {
  if (scores.empty()) return 0.0;
  double sum = 0.0;
  for (double s : scores) sum += s;
  return sum / static_cast<double>(scores.size());
}

inline double score_segments(std::span<const TextPair> segments, const ScorerHandle &scorer,
                             const WindowConfig &cfg) {
  const auto wins = windows(segments, cfg);
  const auto scores = score_windows(wins, scorer);
  return mean_score(scores);
}

inline double score_subdoc(const SubDocument &sub, const ScorerHandle &scorer, const WindowConfig &cfg = {}) {
  const auto pairs = segment_pairs(sub);
  return score_segments(pairs, scorer, cfg);
}

struct ScoredSubDocument {
  std::string sub_doc_id;
  std::size_t n_segments = 0;
  double score = 0.0;
  CutoffSet kept_at;
};

// round(fraction * n), halves rounded up.
inline std::size_t keep_count(double fraction, std::size_t n) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ConfigError("fraction must lie in (0,1]");
  return std::min(n, static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 0.5)));
}

// Indices of `scored` in rank order: score descending, then sub_doc_id
// ascending.
inline std::vector<std::size_t> rank_order(std::span<const ScoredSubDocument> scored) {
  std::vector<std::size_t> order(scored.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scored[a].score != scored[b].score) return scored[a].score > scored[b].score;
    return scored[a].sub_doc_id < scored[b].sub_doc_id;
  });
  return order;
}

// Indices (rank order) of the top round(fraction*N) sub-documents.
inline std::vector<std::size_t> select_top(std::span<const ScoredSubDocument> scored, double fraction) {
  const std::size_t keep = keep_count(fraction, scored.size());
  for (const auto &s : scored) {
    if (!std::isfinite(s.score)) throw ConfigError("non-finite score for " + s.sub_doc_id);
  }
  auto order = rank_order(scored);
  order.resize(keep);
  return order;
}

// Tags each sub-document with every standard cutoff it survives.
inline void assign_cutoffs(std::span<ScoredSubDocument> scored) {
  for (auto &s : scored) s.kept_at = CutoffSet();
  for (Cutoff c : kCutoffs) {
    for (std::size_t i : select_top(scored, fraction_of(c))) scored[i].kept_at.insert(c);
  }
}

namespace detail {

// Lowercased code point trigrams packed into 63 bits, sorted and unique.
inline std::vector<std::uint64_t> trigram_set(std::string_view s) {
  std::vector<char32_t> cps;
  cps.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) cps.push_back(unicode::to_lower(unicode::next(s, i)));
  std::vector<std::uint64_t> grams;
  if (cps.size() < 3) return grams;
  grams.reserve(cps.size() - 2);
  for (std::size_t i = 0; i + 2 < cps.size(); ++i) {
    grams.push_back((std::uint64_t{cps[i]} << 42) | (std::uint64_t{cps[i + 1]} << 21) | std::uint64_t{cps[i + 2]});
  }
  std::sort(grams.begin(), grams.end());
  grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
  return grams;
}

}  // namespace detail

// Deterministic QE stand-in: |A∩B| / max(1, |A∪B|) over lowercased
// character trigram sets.
inline double mock_score(std::string_view src, std::string_view tgt) {
  const auto a = detail::trigram_set(src);
  const auto b = detail::trigram_set(tgt);
  std::size_t common = 0;
  for (std::size_t i = 0, j = 0; i < a.size() && j < b.size();) {
    if (a[i] == b[j]) {
      ++common;
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  const std::size_t uni = a.size() + b.size() - common;
  return static_cast<double>(common) / static_cast<double>(std::max<std::size_t>(1, uni));
}

inline constexpr std::string_view kMockBackend = "mock-trigram-v1";

inline ScorerHandle mock_scorer() {
  return {std::string(kMockBackend),
          [](std::span<const TextPair> pairs) {
            std::vector<double> out;
            out.reserve(pairs.size());
            for (const auto &p : pairs) out.push_back(mock_score(p.src, p.tgt));
            return out;
          },
          0};
}

}  // namespace docstitch

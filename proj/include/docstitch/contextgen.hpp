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

// Context-concatenated samples for document-level training and inference,
// and deterministic mixing of a context stream with a sentence stream.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "docstitch/docbreak.hpp"
#include "docstitch/error.hpp"
#include "docstitch/sentfilter.hpp"

namespace docstitch {

using Tokenizer = std::function<std::size_t(std::string_view)>;

struct ContextConfig {
  std::size_t max_segments = 10;
  std::size_t max_tokens = 256;
  std::string separator = "<eos>";
  Tokenizer tokenizer = [](std::string_view s) { return whitespace_tokens(s); };

  void validate() const {
    if (max_segments < 1) throw ConfigError("max_segments must be at least 1");
    if (max_tokens < 1) throw ConfigError("max_tokens must be at least 1");
    if (separator.empty()) throw ConfigError("separator must be non-empty");
    if (!tokenizer) throw ConfigError("tokenizer is not set");
  }
};

struct ContextSample {
  std::string sub_doc_id;
  std::size_t first_seg_index = 0;
  std::size_t last_seg_index = 0;
  std::string src_text;
  std::string tgt_text;
  std::size_t n_segments = 0;
  // A single segment longer than max_tokens, passed through untruncated.
  bool oversize = false;

  bool operator==(const ContextSample &) const = default;
};

namespace detail {

struct SegmentCost {
  std::size_t src = 0;
  std::size_t tgt = 0;
};

class ChunkBuilder {
 public:
  ChunkBuilder(const SubDocument &sub, const ContextConfig &cfg) : sub_(sub), cfg_(cfg) {
    cfg.validate();
    sep_tokens_ = cfg.tokenizer(cfg.separator);
    costs_.reserve(sub.records.size());
    for (const auto &r : sub.records) costs_.push_back({cfg.tokenizer(r.src_text), cfg.tokenizer(r.tgt_text)});
  }

  // Token count of the longer side of records [first, last], separators
  // included.
  std::size_t tokens(std::size_t first, std::size_t last) const {
    std::size_t src = 0, tgt = 0;
    for (std::size_t i = first; i <= last; ++i) {
      src += costs_[i].src;
      tgt += costs_[i].tgt;
    }
    const std::size_t seps = (last - first) * sep_tokens_;
    return std::max(src, tgt) + seps;
  }

  bool fits(std::size_t first, std::size_t last) const {
    return last - first + 1 <= cfg_.max_segments && tokens(first, last) <= cfg_.max_tokens;
  }

  ContextSample make(std::size_t first, std::size_t last) const {
    ContextSample s;
    s.sub_doc_id = sub_.sub_doc_id;
    s.first_seg_index = sub_.records[first].seg_index;
    s.last_seg_index = sub_.records[last].seg_index;
    s.n_segments = last - first + 1;
    s.oversize = first == last && tokens(first, last) > cfg_.max_tokens;
    const std::string glue = " " + cfg_.separator + " ";
    for (std::size_t i = first; i <= last; ++i) {
      if (i != first) {
        s.src_text += glue;
        s.tgt_text += glue;
      }
      s.src_text += sub_.records[i].src_text;
      s.tgt_text += sub_.records[i].tgt_text;
    }
    return s;
  }

  std::size_t size() const { return costs_.size(); }

 private:
  const SubDocument &sub_;
  const ContextConfig &cfg_;
  std::size_t sep_tokens_ = 0;
  std::vector<SegmentCost> costs_;
};

}  // namespace detail

// Greedy left-to-right partition of the sub-document into chunks that obey
// both caps.
inline std::vector<ContextSample> emit_train_samples(const SubDocument &sub, const ContextConfig &cfg = {}) {
  detail::ChunkBuilder chunks(sub, cfg);
  std::vector<ContextSample> out;
  std::size_t first = 0;
  while (first < chunks.size()) {
    std::size_t last = first;
    while (last + 1 < chunks.size() && chunks.fits(first, last + 1)) ++last;
    out.push_back(chunks.make(first, last));
    first = last + 1;
  }
  return out;
}

// One sample per segment: the segment preceded by as much context as the
// caps allow.  The scored segment is always last.
inline std::vector<ContextSample> emit_eval_inputs(const SubDocument &sub, const ContextConfig &cfg = {}) {
  detail::ChunkBuilder chunks(sub, cfg);
  std::vector<ContextSample> out;
  out.reserve(chunks.size());
  for (std::size_t last = 0; last < chunks.size(); ++last) {
    std::size_t first = last;
    while (first > 0 && chunks.fits(first - 1, last)) --first;
    out.push_back(chunks.make(first, last));
  }
  return out;
}

struct MixConfig {
  std::size_t take_a = 1;
  std::size_t take_b = 1;
  // Restart exhausted streams (reshuffled with `seed`) instead of draining
  // the other one.
  bool cycle = false;
  std::uint64_t seed = 0;
};

// Interleaves two streams, take_a items from `a` then take_b from `b`.
template <typename T>
class StreamMixer {
 public:
  StreamMixer(std::vector<T> a, std::vector<T> b, MixConfig cfg)
      : streams_{std::move(a), std::move(b)}, cfg_(cfg), rng_(cfg.seed) {
    if (cfg_.take_a == 0 && cfg_.take_b == 0) throw ConfigError("mixing ratio cannot be 0:0");
    for (int s = 0; s < 2; ++s) {
      order_[s].resize(streams_[s].size());
      for (std::size_t i = 0; i < order_[s].size(); ++i) order_[s][i] = i;
    }
  }

  std::optional<T> next() {
    if (drain_) {
      if (!available(current_)) return std::nullopt;
      return pull(current_);
    }
    // At most one switch is needed: the other stream either has quota and
    // items, or we fall back to draining.
    for (int switches = 0; switches < 3; ++switches) {
      const std::size_t quota = current_ == 0 ? cfg_.take_a : cfg_.take_b;
      const bool here = available(current_);
      if (!here && !available(1 - current_)) return std::nullopt;
      if (!here) {
        current_ = 1 - current_;
        drain_ = true;
        return pull(current_);
      }
      if (taken_ < quota) {
        ++taken_;
        return pull(current_);
      }
      current_ = 1 - current_;
      taken_ = 0;
    }
    return std::nullopt;
  }

 private:
  bool available(int s) {
    if (pos_[s] < streams_[s].size()) return true;
    if (!cfg_.cycle || streams_[s].empty()) return false;
    reshuffle(s);
    return true;
  }

  T pull(int s) { return streams_[s][order_[s][pos_[s]++]]; }

  // Fisher-Yates with an explicit bounded draw so the order only depends on
  // the mt19937_64 stream, not on the standard library.
  void reshuffle(int s) {
    auto &order = order_[s];
    for (std::size_t i = order.size(); i > 1; --i) {
      const std::uint64_t bound = i;
      const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
      std::uint64_t draw;
      do {
        draw = rng_();
      } while (draw >= limit);
      std::swap(order[i - 1], order[draw % bound]);
    }
    pos_[s] = 0;
  }

  std::vector<T> streams_[2];
  std::vector<std::size_t> order_[2];
  std::size_t pos_[2] = {0, 0};
  MixConfig cfg_;
  std::mt19937_64 rng_;
  int current_ = 0;
  std::size_t taken_ = 0;
  bool drain_ = false;
};

// Bounded mix.  Without cycling the result holds every element of both
// streams; with cycling it stops after `limit` elements.
template <typename T>
std::vector<T> mix_streams(std::vector<T> a, std::vector<T> b, MixConfig cfg = {}, std::size_t limit = 0) {
  if (cfg.cycle && limit == 0) throw ConfigError("a cycling mix needs an output limit");
  StreamMixer<T> mixer(std::move(a), std::move(b), cfg);
  std::vector<T> out;
  while (!cfg.cycle || out.size() < limit) {
    auto item = mixer.next();
    if (!item) break;
    out.push_back(std::move(*item));
  }
  return out;
}

}  // namespace docstitch

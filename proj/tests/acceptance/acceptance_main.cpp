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

// Acceptance checks: one PASS/FAIL line per criterion.  Exit status is the
// number of failures.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "docstitch.hpp"
#include "test_util.hpp"

namespace {

using namespace docstitch;
using docstitch::testing::Rng;
using docstitch::testing::uniform;
using Clock = std::chrono::steady_clock;

// Tolerances and sizes.
constexpr double kSpanSeconds = 10.0;
constexpr double kThroughputSeconds = 60.0;
constexpr std::size_t kThroughputSegments = 1'000'000;
constexpr double kRowSumTolerance = 0.2;
constexpr double kRatioToleranceDocs = 1.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

const RuleBasedSplitter &splitter() {
  static const RuleBasedSplitter s([](const std::string &) {});
  return s;
}

// Independent UTF-8 decoding for slicing by code point.
std::u32string decode(std::string_view s) {
  std::u32string out;
  for (std::size_t i = 0; i < s.size();) {
    const auto b = static_cast<unsigned char>(s[i]);
    const int len = b < 0x80 ? 1 : b < 0xE0 ? 2 : b < 0xF0 ? 3 : 4;
    char32_t c = len == 1 ? b : len == 2 ? (b & 0x1F) : len == 3 ? (b & 0x0F) : (b & 0x07);
    for (int k = 1; k < len; ++k) c = (c << 6) | (static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]) & 0x3F);
    out.push_back(c);
    i += static_cast<std::size_t>(len);
  }
  return out;
}

Outcome adjacency_example() {
  std::string filler;
  while (filler.size() < 1792) filler += "lorem ";
  filler.resize(1792);
  const std::string raw = filler + ". Art is trying to become a science. It is also trying to become an art.";
  const MonoDocument doc = index_document("art", raw, "en", splitter());
  const std::vector<SegmentPair> segs = {{"Art is trying to become a science.", "Art is trying to become a science."},
                                         {"It is also trying to become an art.", "It is also trying to become an art."}};
  const auto recs = annotate_document(doc, doc, segs, constant_classifier(0.99), nullptr);
  const bool spans = recs[0].src.end_char == 1827 && recs[1].src.start_char == 1829;
  bool gaps_ok = is_consecutive(recs[0].src, recs[1].src);
  for (std::size_t start = 1820; start <= 1840; ++start) {
    SideAnnotation prev, next;
    prev.end_char = 1827;
    next.start_char = start;
    if (is_consecutive(prev, next) != (start == 1829)) gaps_ok = false;
  }
  return {spans && gaps_ok, "end=" + std::to_string(recs[0].src.end_char) +
                                " next_start=" + std::to_string(recs[1].src.start_char)};
}

Outcome span_fidelity() {
  Rng rng(101);
  const auto t0 = Clock::now();
  std::size_t matched = 0, exact = 0, planted_missed = 0, absent_found = 0;
  constexpr int kDocs = 1200;
  for (int d = 0; d < kDocs; ++d) {
    std::vector<std::string> sentences;
    const std::size_t n = uniform(rng, 1, 25);
    for (std::size_t k = 0; k < n; ++k) {
      if (k && uniform(rng, 0, 4) == 0) {
        sentences.push_back(sentences[uniform(rng, 0, k - 1)]);
      } else {
        sentences.push_back(docstitch::testing::random_sentence(rng, uniform(rng, 1, 8)));
      }
    }
    std::string raw;
    for (const auto &s : sentences) raw += s + (uniform(rng, 0, 4) ? " " : uniform(rng, 0, 1) ? "\n\n" : "  \n ");
    const MonoDocument doc = index_document("d" + std::to_string(d), raw, "en", splitter());
    const std::u32string text = decode(doc.norm_text);

    std::vector<SegmentPair> segs;
    std::vector<bool> planted;
    for (std::size_t k = 0; k < n; ++k) {
      if (uniform(rng, 0, 5) == 0) continue;
      segs.push_back({sentences[k], sentences[k]});
      planted.push_back(true);
      if (uniform(rng, 0, 10) == 0) {
        segs.push_back({"Nowhere to be found.", "Nowhere to be found."});
        planted.push_back(false);
      }
    }
    const auto recs = annotate_document(doc, doc, segs, constant_classifier(1.0), nullptr);
    for (std::size_t i = 0; i < recs.size(); ++i) {
      const auto &a = recs[i].src;
      if (!a.found) {
        if (planted[i]) ++planted_missed;
        continue;
      }
      if (!planted[i]) ++absent_found;
      ++matched;
      const std::u32string slice = text.substr(a.start_char, a.end_char - a.start_char + 1);
      if (a.end_char < text.size() && slice == decode(recs[i].src_text)) ++exact;
    }
  }
  const double secs = seconds_since(t0);
  const bool pass = matched > 0 && exact == matched && planted_missed == 0 && absent_found == 0 && secs < kSpanSeconds;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%d docs, %zu/%zu spans exact, %.2fs", kDocs, exact, matched, secs);
  return {pass, buf};
}

// Brute-force splitter: enumerate every (i, j) run and keep the maximal
// ones whose records all pass and are pairwise adjacent.
std::vector<std::vector<std::size_t>> brute_force_split(const std::vector<AnnotatedRecord> &recs) {
  const std::size_t n = recs.size();
  auto ok = [&](std::size_t i) {
    for (const SideAnnotation *a : {&recs[i].src, &recs[i].tgt}) {
      if (!a->found || !(a->lid_prob > 0.5) || (a->dup_count && *a->dup_count > 100)) return false;
    }
    return true;
  };
  auto adjacent = [&](std::size_t i) {
    return recs[i - 1].src.found && recs[i].src.found && recs[i - 1].tgt.found && recs[i].tgt.found &&
           recs[i].src.start_char == recs[i - 1].src.end_char + 2 &&
           recs[i].tgt.start_char == recs[i - 1].tgt.end_char + 2;
  };
  auto valid = [&](std::size_t i, std::size_t j) {
    for (std::size_t k = i; k <= j; ++k) {
      if (!ok(k) || (k > i && !adjacent(k))) return false;
    }
    return true;
  };
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!valid(i, j)) continue;
      const bool left_max = i == 0 || !valid(i - 1, j);
      const bool right_max = j + 1 == n || !valid(i, j + 1);
      if (left_max && right_max) {
        out.emplace_back();
        for (std::size_t k = i; k <= j; ++k) out.back().push_back(recs[k].seg_index);
      }
    }
  }
  return out;
}

Outcome docbreak_oracle() {
  Rng rng(103);
  std::size_t mismatches = 0;
  std::array<std::size_t, 3> conditions{};  // lid, dup, gap breaks seen
  constexpr int kDocs = 500;
  for (int d = 0; d < kDocs; ++d) {
    std::vector<AnnotatedRecord> recs;
    std::size_t src_pos = 0, tgt_pos = 0;
    const std::size_t n = uniform(rng, 0, 20);
    for (std::size_t i = 0; i < n; ++i) {
      AnnotatedRecord r;
      r.doc_id = "doc";
      r.seg_index = i;
      for (auto [a, pos] : {std::pair{&r.src, &src_pos}, std::pair{&r.tgt, &tgt_pos}}) {
        if (uniform(rng, 0, 6) == 0) {
          *pos += uniform(rng, 1, 3);
          ++conditions[2];
        }
        const std::size_t len = uniform(rng, 1, 40);
        a->start_char = *pos;
        a->end_char = *pos + len - 1;
        *pos += len + 1;
        a->lid_prob = 0.9;
        a->dup_count = uniform(rng, 1, 50);
        switch (uniform(rng, 0, 14)) {
          case 0: a->lid_prob = 0.5; ++conditions[0]; break;
          case 1: a->lid_prob = docstitch::testing::random_unit4(rng); ++conditions[0]; break;
          case 2: a->dup_count = uniform(rng, 100, 102); ++conditions[1]; break;
          case 3: *a = SideAnnotation::not_found(0.9, 1); break;
          default: break;
        }
      }
      recs.push_back(r);
    }
    std::vector<std::vector<std::size_t>> got;
    for (const auto &s : break_document(recs, {})) {
      got.emplace_back();
      for (const auto &r : s.records) got.back().push_back(r.seg_index);
    }
    if (got != brute_force_split(recs)) ++mismatches;
  }
  const bool covered = conditions[0] && conditions[1] && conditions[2];
  return {mismatches == 0 && covered, std::to_string(kDocs) + " docs, " + std::to_string(mismatches) +
                                          " mismatches, breaks lid/dup/gap " + std::to_string(conditions[0]) + "/" +
                                          std::to_string(conditions[1]) + "/" + std::to_string(conditions[2])};
}

Outcome slide_correctness() {
  Rng rng(107);
  // Score depends only on the window text; the oracle enumerates windows
  // itself.
  auto text_score = [](const std::string &s, const std::string &t) {
    return static_cast<double>(std::hash<std::string>{}(s + "\x1f" + t) % 10007) / 10006.0;
  };
  std::size_t calls = 0;
  ScorerHandle scorer{"hash", [&](std::span<const TextPair> pairs) {
                        std::vector<double> out;
                        for (const auto &p : pairs) out.push_back(text_score(p.src, p.tgt));
                        calls += pairs.size();
                        return out;
                      },
                      0};
  std::size_t bad = 0;
  for (std::size_t n = 2; n <= 50; ++n) {
    SubDocument sub;
    for (std::size_t i = 0; i < n; ++i) {
      AnnotatedRecord r;
      r.seg_index = i;
      r.src_text = docstitch::testing::random_sentence(rng, uniform(rng, 1, 6));
      r.tgt_text = docstitch::testing::random_sentence(rng, uniform(rng, 1, 6));
      sub.records.push_back(r);
    }
    std::vector<double> expected;
    if (n < 3) {
      expected.push_back(text_score(sub.records[0].src_text + " " + sub.records[1].src_text,
                                    sub.records[0].tgt_text + " " + sub.records[1].tgt_text));
    }
    for (std::size_t i = 0; i + 3 <= n; ++i) {
      std::string s = sub.records[i].src_text, t = sub.records[i].tgt_text;
      for (std::size_t k = i + 1; k < i + 3; ++k) {
        s += " " + sub.records[k].src_text;
        t += " " + sub.records[k].tgt_text;
      }
      expected.push_back(text_score(s, t));
    }
    double sum = 0.0;
    for (double e : expected) sum += e;
    const double oracle = sum / static_cast<double>(expected.size());
    calls = 0;
    const double got = score_subdoc(sub, scorer, {3, 1});
    const std::size_t want_windows = n >= 3 ? n - 3 + 1 : 1;
    if (got != oracle || calls != want_windows || window_ranges(n, {3, 1}).size() != want_windows) ++bad;
  }
  return {bad == 0, "n=2..50, " + std::to_string(bad) + " mismatches"};
}

Outcome filtering_cutoffs() {
  Rng rng(109);
  std::size_t bad = 0;
  for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 7u, 10u, 99u, 1000u, 4097u, 10000u}) {
    std::vector<ScoredSubDocument> scored(n);
    for (std::size_t i = 0; i < n; ++i) {
      scored[i].sub_doc_id = "d" + std::to_string(i) + "#0";
      scored[i].score = docstitch::testing::random_unit4(rng);
    }
    std::map<double, std::set<std::size_t>> kept;
    for (double p : {0.25, 0.5, 0.75}) {
      const auto top = select_top(scored, p);
      const auto want = static_cast<std::size_t>(std::floor(p * static_cast<double>(n) + 0.5));
      if (top.size() != want) ++bad;
      kept[p] = std::set<std::size_t>(top.begin(), top.end());
      // Everything kept scores at least as well as everything dropped.
      double worst_kept = 2.0, best_dropped = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (kept[p].count(i)) {
          worst_kept = std::min(worst_kept, scored[i].score);
        } else {
          best_dropped = std::max(best_dropped, scored[i].score);
        }
      }
      if (worst_kept < best_dropped) ++bad;
    }
    if (!std::includes(kept[0.5].begin(), kept[0.5].end(), kept[0.25].begin(), kept[0.25].end())) ++bad;
    if (!std::includes(kept[0.75].begin(), kept[0.75].end(), kept[0.5].begin(), kept[0.5].end())) ++bad;
  }

  // Document counts per pair in units of 100k: docs, loose, medium, strict.
  const std::map<std::string, std::array<double, 4>> table = {
      {"de", {454, 341, 227, 114}}, {"fr", {323, 242, 161, 80.7}}, {"es", {379, 285, 190, 95}},
      {"it", {128, 95.8, 63.8, 31.9}}, {"pl", {75.5, 56.6, 37.7, 18.9}}, {"pt", {150, 112, 75, 37}}};
  double worst = 0.0;
  for (const auto &[pair, row] : table) {
    const auto n = static_cast<std::size_t>(std::lround(row[0] * 10));  // units of 10k
    std::vector<ScoredSubDocument> scored(n);
    for (std::size_t i = 0; i < n; ++i) {
      scored[i].sub_doc_id = pair + std::to_string(i);
      scored[i].score = docstitch::testing::random_unit4(rng);
    }
    assign_cutoffs(scored);
    for (std::size_t c = 0; c < kCutoffs.size(); ++c) {
      const auto count = static_cast<double>(std::count_if(
          scored.begin(), scored.end(), [&](const auto &s) { return s.kept_at.contains(kCutoffs[c]); }));
      // Reference counts carry three significant figures: compare at 100k scale.
      worst = std::max(worst, std::abs(count / 10.0 - row[c + 1]));
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%zu violations; reference retention max deviation %.2f docs", bad, worst);
  return {bad == 0 && worst <= kRatioToleranceDocs, buf};
}

Outcome contextgen_caps() {
  Rng rng(113);
  const ContextConfig cfg;
  std::size_t bad = 0, samples = 0, oversize = 0;
  for (int d = 0; d < 1000; ++d) {
    SubDocument sub;
    sub.sub_doc_id = "c#" + std::to_string(d);
    const std::size_t n = uniform(rng, 2, 45);
    for (std::size_t i = 0; i < n; ++i) {
      AnnotatedRecord r;
      r.seg_index = 7 + i;
      r.src_text = docstitch::testing::random_sentence(rng, uniform(rng, 0, 50) == 0 ? 280 : uniform(rng, 1, 70));
      r.tgt_text = docstitch::testing::random_sentence(rng, uniform(rng, 1, 70));
      sub.records.push_back(r);
    }
    std::size_t next = 7;
    std::string src, tgt;
    for (const auto &s : emit_train_samples(sub, cfg)) {
      ++samples;
      const std::size_t seps = [&] {
        std::size_t k = 0;
        for (auto at = s.src_text.find("<eos>"); at != std::string::npos; at = s.src_text.find("<eos>", at + 1)) ++k;
        return k;
      }();
      const std::size_t tokens = std::max(whitespace_tokens(s.src_text), whitespace_tokens(s.tgt_text));
      if (s.n_segments > cfg.max_segments || seps + 1 != s.n_segments) ++bad;
      if (s.oversize) {
        ++oversize;
        if (s.n_segments != 1 || tokens <= cfg.max_tokens) ++bad;
      } else if (tokens > cfg.max_tokens) {
        ++bad;
      }
      if (s.first_seg_index != next) ++bad;
      next = s.last_seg_index + 1;
      src += (src.empty() ? "" : " <eos> ") + s.src_text;
      tgt += (tgt.empty() ? "" : " <eos> ") + s.tgt_text;
    }
    std::string whole_src, whole_tgt;
    for (const auto &r : sub.records) {
      whole_src += (whole_src.empty() ? "" : " <eos> ") + r.src_text;
      whole_tgt += (whole_tgt.empty() ? "" : " <eos> ") + r.tgt_text;
    }
    if (next != 7 + n || src != whole_src || tgt != whole_tgt) ++bad;
  }

  SubDocument fixture;
  for (std::size_t i = 0; i < 25; ++i) {
    AnnotatedRecord r;
    r.seg_index = i;
    for (int w = 0; w < 30; ++w) {
      r.src_text += (w ? " w" : "w") + std::to_string(w);
      r.tgt_text += (w ? " v" : "v") + std::to_string(w);
    }
    fixture.records.push_back(r);
  }
  std::vector<std::size_t> sizes;
  for (const auto &s : emit_train_samples(fixture, cfg)) sizes.push_back(s.n_segments);
  const bool fixture_ok = sizes == std::vector<std::size_t>{8, 8, 8, 1};
  return {bad == 0 && fixture_ok, std::to_string(samples) + " samples (" + std::to_string(oversize) +
                                      " oversize), " + std::to_string(bad) + " violations, 25x30 chunks " +
                                      (fixture_ok ? "8/8/8/1" : "wrong")};
}

Outcome sentfilter_properties() {
  Rng rng(127);
  CharsetRegistry charsets;
  const std::string latin = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZäöüéęáßœèçñ";
  charsets.add("en", CharsetTable::from_text(latin));
  charsets.add("de", CharsetTable::from_text(latin));
  const FilterModels models{nullptr, nullptr, nullptr, &charsets};
  const SentFilterConfig cfg;
  const LanguagePair langs{"en", "de"};

  std::vector<SegmentPair> lines;
  for (int i = 0; i < 10000; ++i) {
    SegmentPair p{docstitch::testing::random_sentence(rng, uniform(rng, 1, 12)),
                  docstitch::testing::random_sentence(rng, uniform(rng, 1, 12))};
    switch (uniform(rng, 0, 15)) {
      case 0: p.src.clear(); break;
      case 1: p.tgt = "?!...;"; break;
      case 2: p.tgt = "日本語のテキスト"; break;
      case 3: if (!lines.empty()) p = lines[uniform(rng, 0, lines.size() - 1)]; break;
      default: break;
    }
    lines.push_back(p);
  }
  const FilterResult once = filter_stream(lines, cfg, langs, models);
  const FilterResult twice = filter_stream(once.kept, cfg, langs, models);
  const bool idempotent = twice.kept == once.kept && twice.report.removed() == 0;
  const FilterReport &rep = once.report;
  const bool reconciled = rep.input == rep.kept + rep.removed() && rep.input == lines.size() &&
                          once.rejected.size() + rep.duplicates + rep.kept == rep.input;

  auto reason = [&](const std::string &s, const std::string &t) { return filter_record(s, t, cfg, langs, models); };
  const bool canonical = reason("", "Hallo Welt.") == RejectReason::empty &&
                         reason(".,!?;", "Hallo") == RejectReason::punct &&
                         reason("one two three four five six seven eight nine", "eins zwei drei vier") ==
                             RejectReason::ratio &&
                         !reason("Hello world.", "Hallo Welt.");
  return {idempotent && reconciled && canonical,
          "10000 lines, kept " + std::to_string(rep.kept) + ", duplicates " + std::to_string(rep.duplicates) +
              ", rejected " + std::to_string(once.rejected.size()) + (canonical ? ", canonical rules ok" : "")};
}

Outcome quartile_analysis() {
  Rng rng(131);
  std::size_t bad = 0;
  for (std::size_t n = 0; n <= 10001; n += (n < 64 ? 1 : 997)) {
    std::vector<double> scores(n);
    for (auto &s : scores) s = docstitch::testing::random_unit4(rng);
    const auto q = assign_quartiles(scores);
    std::array<std::size_t, 4> count{};
    std::array<double, 4> lo{2, 2, 2, 2}, hi{-1, -1, -1, -1};
    for (std::size_t i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(q[i] - 1);
      ++count[k];
      lo[k] = std::min(lo[k], scores[i]);
      hi[k] = std::max(hi[k], scores[i]);
    }
    const auto [mn, mx] = std::minmax_element(count.begin(), count.end());
    if (*mx - *mn > 1) ++bad;
    for (std::size_t k = 0; k + 1 < 4; ++k) {
      if (count[k] && count[k + 1] && lo[k] < hi[k + 1]) ++bad;
    }
  }
  {
    std::vector<double> big(10001);
    for (auto &s : big) s = docstitch::testing::random_unit4(rng);
    const auto q = assign_quartiles(big);
    std::array<std::size_t, 4> count{};
    for (int v : q) ++count[static_cast<std::size_t>(v - 1)];
    const auto [mn, mx] = std::minmax_element(count.begin(), count.end());
    if (*mx - *mn > 1) ++bad;
  }

  // Planted fixture: 100 sub-documents in score order, examples planted per
  // quartile with known counts.
  std::vector<double> scores;
  std::unordered_map<std::string, int> quartile_of;
  for (int k = 0; k < 100; ++k) scores.push_back(1.0 - k / 100.0);
  const auto q = assign_quartiles(scores);
  for (int k = 0; k < 100; ++k) quartile_of["p" + std::to_string(k) + "#0"] = q[static_cast<std::size_t>(k)];
  const std::map<std::string, std::array<int, 4>> planted = {
      {"inter-fem", {7, 5, 2, 1}},   {"inter-masc", {10, 10, 10, 10}}, {"inter-neut", {1, 0, 0, 2}},
      {"intra-fem", {54, 29, 13, 4}}, {"intra-masc", {3, 3, 3, 0}},     {"intra-neut", {0, 0, 0, 9}}};
  std::vector<PhenomenonExample> examples;
  for (const auto &[name, counts] : planted) {
    for (int quart = 0; quart < 4; ++quart) {
      for (int i = 0; i < counts[static_cast<std::size_t>(quart)]; ++i) {
        examples.push_back({"p" + std::to_string(quart * 25 + i % 25) + "#0", *category_from_string(name)});
      }
    }
  }
  const auto table = phenomenon_distribution(examples, quartile_of);
  std::size_t recovered = 0;
  double worst_sum = 0.0;
  for (const auto &[cat, row] : table) {
    const auto &want = planted.at(to_string(cat));
    if (row.counts == std::array<std::size_t, 4>{static_cast<std::size_t>(want[0]), static_cast<std::size_t>(want[1]),
                                                 static_cast<std::size_t>(want[2]), static_cast<std::size_t>(want[3])}) {
      ++recovered;
    }
    double sum = 0.0;
    for (int k = 1; k <= 4; ++k) sum += std::stod(format_percent(row.percent(k)));
    worst_sum = std::max(worst_sum, std::abs(sum - 100.0));
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%zu partition violations, planted rows %zu/%zu, worst row sum deviation %.2f", bad,
                recovered, planted.size(), worst_sum);
  return {bad == 0 && recovered == planted.size() && worst_sum <= kRowSumTolerance, buf};
}

// Synthetic corpus: documents of sentences with boilerplate between some of
// them and shared sentences across documents.
struct SyntheticDoc {
  std::string id;
  std::string src_raw;
  std::string tgt_raw;
  std::vector<SegmentPair> segments;
};

std::vector<SyntheticDoc> synthetic_corpus(std::size_t n_docs, std::size_t segs_per_doc, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<SegmentPair> shared;
  for (int i = 0; i < 50; ++i) {
    shared.push_back({docstitch::testing::random_sentence(rng, 3), docstitch::testing::random_sentence(rng, 3)});
  }
  std::vector<SyntheticDoc> docs(n_docs);
  for (std::size_t d = 0; d < n_docs; ++d) {
    SyntheticDoc &doc = docs[d];
    doc.id = "doc" + std::to_string(d);
    for (std::size_t i = 0; i < segs_per_doc; ++i) {
      SegmentPair p = uniform(rng, 0, 30) == 0
                          ? shared[uniform(rng, 0, shared.size() - 1)]
                          : SegmentPair{docstitch::testing::random_sentence(rng, uniform(rng, 2, 12)),
                                        docstitch::testing::random_sentence(rng, uniform(rng, 2, 12))};
      if (uniform(rng, 0, 12) == 0) {
        doc.src_raw += "Cookie notice here. ";
        doc.tgt_raw += "Cookie notice here. ";
      }
      doc.src_raw += p.src + (uniform(rng, 0, 9) ? " " : "\n\n");
      doc.tgt_raw += p.tgt + " ";
      doc.segments.push_back(std::move(p));
    }
  }
  return docs;
}

// Reconstruct, break and mock-score; returns the scored record stream.
std::string run_pipeline(const std::vector<SyntheticDoc> &docs, std::size_t workers, std::size_t *segments) {
  DupTable dups;
  for (const auto &d : docs) dups.merge(count_duplicates(d.segments));
  const ClassifierHandle lid = constant_classifier(0.9);
  const ScorerHandle scorer = mock_scorer();
  auto subs_of = parallel_map(docs.size(), workers, [&](std::size_t i) {
    const auto &d = docs[i];
    const MonoDocument src = index_document(d.id, d.src_raw, "en", splitter());
    const MonoDocument tgt = index_document(d.id, d.tgt_raw, "de", splitter());
    const auto recs = annotate_document(src, tgt, d.segments, lid, &dups, CorpusId::paracrawl);
    auto subs = break_document(recs, {});
    std::vector<std::pair<SubDocument, double>> out;
    for (auto &s : subs) {
      const double score = quantize4(score_subdoc(s, scorer));
      out.emplace_back(std::move(s), score);
    }
    return out;
  });
  std::vector<ScoredSubDocument> ranked;
  std::vector<const SubDocument *> order;
  for (auto &subs : subs_of) {
    for (auto &[s, score] : subs) {
      ranked.push_back({s.sub_doc_id, s.size(), score, {}});
      order.push_back(&s);
    }
  }
  assign_cutoffs(ranked);
  std::string out;
  std::size_t n = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (const auto &r : order[i]->records) {
      ScoredRecord sr;
      sr.record = r;
      sr.record.slide_score = ranked[i].score;
      sr.kept_at = ranked[i].kept_at;
      out += serialize_scored_record(sr);
      out += '\n';
    }
  }
  for (const auto &d : docs) n += d.segments.size();
  if (segments) *segments = n;
  return out;
}

Outcome determinism_and_throughput() {
  const auto small = synthetic_corpus(500, 20, 137);
  const std::string a = run_pipeline(small, 1, nullptr);
  const std::string b = run_pipeline(small, 4, nullptr);
  const std::string c = run_pipeline(synthetic_corpus(500, 20, 137), 2, nullptr);
  const MixConfig mix{1, 1, true, 42};
  std::vector<int> xs(300), ys(200);
  for (int i = 0; i < 300; ++i) xs[static_cast<std::size_t>(i)] = i;
  for (int i = 0; i < 200; ++i) ys[static_cast<std::size_t>(i)] = -i;
  const bool mix_same = mix_streams(xs, ys, mix, 2000) == mix_streams(xs, ys, mix, 2000);
  const bool identical = !a.empty() && a == b && a == c && mix_same;

  const auto docs = synthetic_corpus(kThroughputSegments / 20, 20, 139);
  const auto t0 = Clock::now();
  std::size_t segments = 0;
  const std::string big = run_pipeline(docs, std::max(1u, std::thread::hardware_concurrency()), &segments);
  const double secs = seconds_since(t0);
  const auto lines = static_cast<std::size_t>(std::count(big.begin(), big.end(), '\n'));
  char buf[200];
  std::snprintf(buf, sizeof(buf), "reruns %s; %zu segments -> %zu sub-document records in %.1fs",
                identical ? "byte-identical" : "DIFFER", segments, lines, secs);
  return {identical && segments >= kThroughputSegments && lines > 0 && secs < kThroughputSeconds, buf};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> checks = {
      {"adjacency-example", adjacency_example},
      {"span-fidelity", span_fidelity},
      {"docbreak-oracle", docbreak_oracle},
      {"slide-correctness", slide_correctness},
      {"filtering-cutoffs", filtering_cutoffs},
      {"contextgen-caps", contextgen_caps},
      {"sentfilter-properties", sentfilter_properties},
      {"quartile-analysis", quartile_analysis},
      {"determinism-throughput", determinism_and_throughput},
  };
  int failures = 0;
  for (const auto &[name, check] : checks) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
